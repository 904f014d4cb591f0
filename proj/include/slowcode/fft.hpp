#pragma once

#include <span>

#include "slowcode/core.hpp"

namespace slowcode {

/// Owning wrapper around an FFTW plan with its own aligned buffers.
///
/// Forward transforms use exp(-j*2*pi*k*n/L); inverse transforms are
/// unnormalized. Planning uses FFTW_ESTIMATE so results do not depend on
/// timing measurements.
class FftPlan {
public:
    enum class Direction { forward, inverse };

    FftPlan(int length, Direction dir);
    FftPlan(int rows, int cols, Direction dir);  ///< 2-D, row-major
    ~FftPlan();

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    [[nodiscard]] int size() const noexcept { return size_; }

    /// Input shorter than size() is zero-padded.
    void execute(std::span<const cdouble> in, std::span<cdouble> out) const;

private:
    void make(int rank, const int* dims, Direction dir);

    int size_ = 0;
    cdouble* in_ = nullptr;
    cdouble* out_ = nullptr;
    void* plan_ = nullptr;
};

}  // namespace slowcode
