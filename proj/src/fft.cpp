#include "slowcode/fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

namespace slowcode {

namespace {
// The FFTW planner is not reentrant.
std::mutex planner_mutex;
}  // namespace

FftPlan::FftPlan(int length, Direction dir) {
    const int dims[1] = {length};
    make(1, dims, dir);
}

FftPlan::FftPlan(int rows, int cols, Direction dir) {
    const int dims[2] = {rows, cols};
    make(2, dims, dir);
}

void FftPlan::make(int rank, const int* dims, Direction dir) {
    size_ = 1;
    for (int i = 0; i < rank; ++i) {
        if (dims[i] < 1) throw InvalidDimension("FFT length must be positive");
        size_ *= dims[i];
    }
    std::lock_guard lock(planner_mutex);
    in_ = reinterpret_cast<cdouble*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(size_)));
    out_ = reinterpret_cast<cdouble*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(size_)));
    if (in_ == nullptr || out_ == nullptr) {
        fftw_free(in_);
        fftw_free(out_);
        throw std::bad_alloc();
    }
    plan_ = fftw_plan_dft(rank, dims, reinterpret_cast<fftw_complex*>(in_),
                          reinterpret_cast<fftw_complex*>(out_),
                          dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex);
    if (plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(in_);
    fftw_free(out_);
}

void FftPlan::execute(std::span<const cdouble> in, std::span<cdouble> out) const {
    const auto n = static_cast<std::size_t>(size_);
    if (in.size() > n || out.size() < n) throw InvalidDimension("FFT buffer size mismatch");
    std::copy(in.begin(), in.end(), in_);
    std::fill(in_ + in.size(), in_ + n, cdouble{});
    fftw_execute(static_cast<fftw_plan>(plan_));
    std::copy(out_, out_ + n, out.begin());
}

}  // namespace slowcode
