#include "slowcode/pcaf.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "slowcode/fft.hpp"
#include "slowcode/metrics.hpp"

namespace slowcode {

namespace {

Eigen::Index wrap(Eigen::Index i, Eigen::Index n) {
    const Eigen::Index r = i % n;
    return r < 0 ? r + n : r;
}

void check_lag(int lag, Eigen::Index n) {
    if (std::abs(static_cast<Eigen::Index>(lag)) >= n) {
        throw InvalidLag("lag " + std::to_string(lag) + " outside +-(N-1) for N = " + std::to_string(n));
    }
}

void check_same_length(const CVector& x, const CVector& y) {
    if (x.size() != y.size()) {
        throw InvalidDimension("code lengths differ: " + std::to_string(x.size()) + " vs " +
                               std::to_string(y.size()));
    }
}

void check_cfg_length(const Code& z, const DesignConfig& cfg) {
    if (static_cast<int>(z.size()) != cfg.n_len) {
        throw InvalidDimension("code length " + std::to_string(z.size()) + " does not match n_len " +
                               std::to_string(cfg.n_len));
    }
}

}  // namespace

void check_grid_params(int n_len, int p_max, int n_f) {
    if (n_len < 2) throw InvalidDimension("N must be at least 2");
    if (n_f <= n_len) throw InvalidDimension("N_f must exceed N");
    if (p_max < 0 || p_max >= n_f) throw InvalidDimension("P must satisfy 0 <= P < N_f");
}

CVector shift_apply(const CVector& z, int lag) {
    const Eigen::Index n = z.size();
    check_lag(lag, n);
    CVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = z[wrap(i + lag, n)];
    return out;
}

CVector shift_apply(const Code& z, int lag) { return shift_apply(z.entries(), lag); }

CVector doppler_steering(int n_len, int p, int n_f) {
    CVector f(n_len);
    for (int n = 0; n < n_len; ++n) {
        // Reduce the product modulo N_f before scaling to keep the phase exact.
        const long long k = (static_cast<long long>(n + 1) * p) % n_f;
        f[n] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / n_f);
    }
    return f;
}

PcafGrid::PcafGrid(int n_len, int p_max, int n_f, CMatrix values)
    : n_len_(n_len), p_max_(p_max), n_f_(n_f), values_(std::move(values)) {
    if (values_.rows() != 2 * n_len_ - 1 || values_.cols() != 2 * p_max_ + 1) {
        throw InvalidDimension("PCAF grid must be (2N-1) x (2P+1)");
    }
}

cdouble PcafGrid::at(int lag, int p) const {
    check_lag(lag, n_len_);
    if (std::abs(p) > p_max_) throw DomainError("Doppler bin " + std::to_string(p) + " outside +-P");
    return values_(lag + n_len_ - 1, p + p_max_);
}

PcafGrid pcaf_grid(const CVector& x, const CVector& y, int p_max, int n_f) {
    check_same_length(x, y);
    const int n = static_cast<int>(x.size());
    check_grid_params(n, p_max, n_f);

    const FftPlan plan(n_f, FftPlan::Direction::forward);
    std::vector<cdouble> g(static_cast<std::size_t>(n));
    std::vector<cdouble> spectrum(static_cast<std::size_t>(n_f));

    // exp(-j*2*pi*p/N_f) accounts for the one-based time index.
    std::vector<cdouble> twiddle(static_cast<std::size_t>(2 * p_max + 1));
    for (int p = -p_max; p <= p_max; ++p) {
        twiddle[static_cast<std::size_t>(p + p_max)] =
            std::polar(1.0, -2.0 * kPi * static_cast<double>(p % n_f) / n_f);
    }

    CMatrix values(2 * n - 1, 2 * p_max + 1);
    for (int lag = -(n - 1); lag <= n - 1; ++lag) {
        for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::conj(x[i]) * y[wrap(i + lag, n)];
        plan.execute(g, spectrum);
        for (int p = -p_max; p <= p_max; ++p) {
            values(lag + n - 1, p + p_max) =
                twiddle[static_cast<std::size_t>(p + p_max)] * spectrum[static_cast<std::size_t>(wrap(p, n_f))];
        }
    }
    return PcafGrid(n, p_max, n_f, std::move(values));
}

PcafGrid pcaf_grid(const Code& x, const Code& y, int p_max, int n_f) {
    return pcaf_grid(x.entries(), y.entries(), p_max, n_f);
}

double objective_siso(const CVector& x, const CVector& y, int p_max, int n_f) {
    return pcaf_grid(x, y, p_max, n_f).values().squaredNorm();
}

double objective_siso(const Code& x, const Code& y, const DesignConfig& cfg) {
    check_cfg_length(x, cfg);
    return objective_siso(x.entries(), y.entries(), cfg.p_max, cfg.n_f);
}

CMatrix build_B_naive(const CVector& z, Side side, int p_max, int n_f) {
    const int n = static_cast<int>(z.size());
    check_grid_params(n, p_max, n_f);
    CMatrix b = CMatrix::Zero(n, n);
    for (int lag = -(n - 1); lag <= n - 1; ++lag) {
        for (int p = -p_max; p <= p_max; ++p) {
            const CVector f = doppler_steering(n, p, n_f);
            CVector v;
            if (side == Side::for_y) {
                // Diag(f_p) C_l y
                v = f.cwiseProduct(shift_apply(z, lag));
            } else {
                // C_l^H Diag(f_p)^H x = C_{-l} (conj(f_p) .* x)
                v = shift_apply(CVector(f.conjugate().cwiseProduct(z)), -lag);
            }
            b.selfadjointView<Eigen::Lower>().rankUpdate(v);
        }
    }
    return b.selfadjointView<Eigen::Lower>();
}

QuadFormMatrix build_B_naive(const Code& z, Side side, const DesignConfig& cfg) {
    check_cfg_length(z, cfg);
    return {build_B_naive(z.entries(), side, cfg.p_max, cfg.n_f), side};
}

CVector periodic_autocorrelation(const CVector& z) {
    const int n = static_cast<int>(z.size());
    const FftPlan fwd(n, FftPlan::Direction::forward);
    const FftPlan inv(n, FftPlan::Direction::inverse);
    std::vector<cdouble> buf(z.data(), z.data() + n);
    std::vector<cdouble> spec(static_cast<std::size_t>(n));
    fwd.execute(buf, spec);
    for (auto& s : spec) s = std::norm(s);
    inv.execute(spec, buf);
    // inverse(|Z|^2)/N gives sum_n conj(z_n) z_{n+l}; c_l is its conjugate.
    CVector c(n);
    for (int l = 0; l < n; ++l) c[l] = std::conj(buf[static_cast<std::size_t>(l)]) / static_cast<double>(n);
    return c;
}

std::vector<double> dirichlet_gram_kernel(int n_len, int p_max, int n_f) {
    std::vector<double> kernel(static_cast<std::size_t>(2 * n_len - 1));
    for (int d = 0; d <= n_len - 1; ++d) {
        double acc = 1.0;
        for (int p = 1; p <= p_max; ++p) {
            const long long k = (static_cast<long long>(d) * p) % n_f;
            acc += 2.0 * std::cos(2.0 * kPi * static_cast<double>(k) / n_f);
        }
        kernel[static_cast<std::size_t>(n_len - 1 + d)] = acc;
        kernel[static_cast<std::size_t>(n_len - 1 - d)] = acc;
    }
    return kernel;
}

Eigen::MatrixXd dirichlet_gram(int n_len, int p_max, int n_f) {
    const auto kernel = dirichlet_gram_kernel(n_len, p_max, n_f);
    Eigen::MatrixXd g(n_len, n_len);
    for (int a = 0; a < n_len; ++a) {
        for (int b = 0; b < n_len; ++b) g(a, b) = kernel[static_cast<std::size_t>(a - b + n_len - 1)];
    }
    return g;
}

CMatrix build_B_fast(const CVector& z, Side side, int p_max, int n_f) {
    const int n = static_cast<int>(z.size());
    check_grid_params(n, p_max, n_f);
    const auto kernel = dirichlet_gram_kernel(n, p_max, n_f);
    const auto gram = [&](int a, int b) { return kernel[static_cast<std::size_t>(a - b + n - 1)]; };

    CMatrix b(n, n);
    if (side == Side::for_y) {
        const CVector c = periodic_autocorrelation(z);
        for (int col = 0; col < n; ++col) {
            for (int row = 0; row < n; ++row) {
                const cdouble r0 = c[wrap(col - row, n)];
                const cdouble ry = 2.0 * r0 - z[row] * std::conj(z[col]);
                b(row, col) = ry * gram(row, col);
            }
        }
    } else {
        CMatrix rx(n, n);
        for (int col = 0; col < n; ++col) {
            for (int row = 0; row < n; ++row) rx(row, col) = z[row] * std::conj(z[col]) * gram(row, col);
        }
        // s_d = sum_i R_x[i, (i + d) mod N]
        CVector s = CVector::Zero(n);
        for (int col = 0; col < n; ++col) {
            for (int row = 0; row < n; ++row) s[wrap(col - row, n)] += rx(row, col);
        }
        for (int col = 0; col < n; ++col) {
            for (int row = 0; row < n; ++row) b(row, col) = 2.0 * s[wrap(col - row, n)] - rx(row, col);
        }
    }
    CMatrix herm = 0.5 * (b + b.adjoint());
    return herm;
}

QuadFormMatrix build_B_fast(const Code& z, Side side, const DesignConfig& cfg) {
    check_cfg_length(z, cfg);
    return {build_B_fast(z.entries(), side, cfg.p_max, cfg.n_f), side};
}

void write_pcaf_csv(const PcafGrid& grid, const std::filesystem::path& complex_path,
                    const std::filesystem::path& db_path) {
    std::ofstream cx(complex_path);
    std::ofstream db(db_path);
    if (!cx || !db) throw Error("cannot open PCAF output files");
    cx << "l,p,re,im\n";
    db << "l,p,db\n";
    char line[128];
    const int n = grid.n_len();
    for (int lag = -(n - 1); lag <= n - 1; ++lag) {
        for (int p = -grid.p_max(); p <= grid.p_max(); ++p) {
            const cdouble r = grid.at(lag, p);
            std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g\n", lag, p, r.real(), r.imag());
            cx << line;
            std::snprintf(line, sizeof line, "%d,%d,%.17g\n", lag, p, magnitude_db(std::abs(r), n));
            db << line;
        }
    }
    if (!cx || !db) throw Error("writing PCAF CSV failed");
}

}  // namespace slowcode
