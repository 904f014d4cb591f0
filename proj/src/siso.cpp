#include "slowcode/siso.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace slowcode {

std::pair<Code, Code> doppler_shift_pair(int n_len) {
    if (n_len < 2) throw InvalidDimension("code length must be at least 2");
    // Built from exact +-1 entries; exp(j*pi) would leave a 1e-16 imaginary part.
    CVector entries(n_len);
    for (int n = 0; n < n_len; ++n) entries[n] = (n % 2 == 0) ? 1.0 : -1.0;
    return {Code::ones(static_cast<std::size_t>(n_len)), Code::from_entries(entries)};
}

std::vector<double> doppler_shift_cut(int n_len, int n_f) {
    check_grid_params(n_len, 0, n_f);
    std::vector<double> cut(static_cast<std::size_t>(n_f));
    const long long period = 2LL * n_f;
    for (int p = 0; p < n_f; ++p) {
        // u = f + 1/2 reduced to [0, 1): u = ((2p + N_f) mod 2N_f) / (2N_f)
        const long long num = (2LL * p + n_f) % period;
        if (num == 0) {
            cut[static_cast<std::size_t>(p)] = n_len;
            continue;
        }
        const double u = static_cast<double>(num) / static_cast<double>(period);
        const long long top = (static_cast<long long>(n_len) * num) % period;
        const double numer = std::sin(kPi * static_cast<double>(top) / static_cast<double>(period));
        cut[static_cast<std::size_t>(p)] = std::abs(numer / std::sin(kPi * u));
    }
    return cut;
}

double doppler_shift_first_sidelobe(int n_len) {
    if (n_len < 2) throw InvalidDimension("code length must be at least 2");
    return 1.0 / std::sin(3.0 * kPi / (2.0 * n_len));
}

bool prf_condition_ok(const FmcwParams& params, double f_d_max) {
    if (!(f_d_max >= 0.0)) throw DomainError("f_d_max must be non-negative");
    return 4.0 * f_d_max < params.prf();
}

double quadratic_form(const CMatrix& b, const CVector& z) { return z.dot(b * z).real(); }

double gamma_bound(const CMatrix& b, GammaMode mode) {
    if (mode == GammaMode::exact) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(b, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed in gamma_bound");
        const double lmax = solver.eigenvalues().maxCoeff();
        return lmax + 1e-3 * std::abs(lmax) + 1e-12;
    }
    const double fro = b.norm();
    return fro > 0.0 ? 1.001 * fro : 1.0;
}

PmliResult pmli_solve(const CMatrix& d, const Code& z0, const PmliOptions& options) {
    const Eigen::Index n = static_cast<Eigen::Index>(z0.size());
    const Eigen::Index dim = options.pinned_tail ? n + 1 : n;
    if (d.rows() != dim || d.cols() != dim) {
        throw InvalidDimension("PMLI matrix is " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                               ", expected " + std::to_string(dim));
    }
    if (options.cap < 1 || !(options.tol > 0.0)) throw ConfigError("PMLI needs cap >= 1 and tol > 0");

    CVector z(dim);
    z.head(n) = z0.entries();
    if (options.pinned_tail) z[n] = 1.0;
    std::vector<double> phases = z0.phases();

    PmliResult result;
    CVector w = d * z;
    double value = z.dot(w).real();
    if (!(value > 0.0)) throw LoadingError("PMLI matrix is not positive definite (z^H D z <= 0)");
    result.objective_trace.push_back(value);

    for (int t = 0; t < options.cap; ++t) {
        double max_change = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (w[i] == cdouble{}) continue;
            const double ph = std::arg(w[i]);
            const cdouble next = std::polar(1.0, ph);
            max_change = std::max(max_change, std::abs(std::arg(next * std::conj(z[i]))));
            z[i] = next;
            phases[static_cast<std::size_t>(i)] = ph;
        }
        ++result.iterations;

        w.noalias() = d * z;
        const double next_value = z.dot(w).real();
        const double slack = 1e-9 + 1e-12 * std::abs(value);
        if (!(next_value > 0.0) || next_value < value - slack) {
            throw LoadingError("PMLI objective decreased; diagonal loading is insufficient");
        }
        value = next_value;
        result.objective_trace.push_back(value);

        if (max_change < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.code = Code::from_phases(std::move(phases));
    return result;
}

namespace {

/// One UQP block: minimize z^H B z starting from z, keeping z when PMLI
/// does not improve the quadratic form.
Code minimize_block(const CMatrix& b, const Code& z, const DesignConfig& cfg) {
    const double gamma = gamma_bound(b, cfg.gamma_mode);
    CMatrix d = -b;
    d.diagonal().array() += gamma;
    const PmliResult res = pmli_solve(d, z, {cfg.inner_tol, cfg.inner_cap, false});
    const double before = quadratic_form(b, z.entries());
    const double after = quadratic_form(b, res.code.entries());
    return after < before - 1e-13 * std::abs(before) ? res.code : z;
}

}  // namespace

SisoDesignResult design_siso(const DesignConfig& cfg, const Code& x0, const Code& y0,
                             const SisoOptions& options) {
    cfg.validate();
    if (static_cast<int>(x0.size()) != cfg.n_len || static_cast<int>(y0.size()) != cfg.n_len) {
        throw InvalidDimension("initial codes must have length n_len = " + std::to_string(cfg.n_len));
    }

    SisoDesignResult result{x0, y0, {}, 0, false};
    const double j0 = objective_siso(result.x, result.y, cfg);
    result.objective_trace.push_back(j0);
    const double stall = cfg.outer_tol * std::max(j0, 1e-300);
    double j_prev = j0;

    for (int s = 1; s <= cfg.outer_cap; ++s) {
        const CMatrix b_y = build_B_fast(result.y.entries(), Side::for_y, cfg.p_max, cfg.n_f);
        result.x = minimize_block(b_y, result.x, cfg);

        if (!options.single_sided) {
            const CMatrix b_x = build_B_fast(result.x.entries(), Side::for_x, cfg.p_max, cfg.n_f);
            result.y = minimize_block(b_x, result.y, cfg);
        }

        const double j = objective_siso(result.x, result.y, cfg);
        if (j > j_prev + 1e-9 * std::max(1.0, j_prev)) {
            throw NumericalError("SISO objective increased from " + std::to_string(j_prev) + " to " +
                                 std::to_string(j) + " at outer iteration " + std::to_string(s));
        }
        result.objective_trace.push_back(j);
        result.outer_iters = s;
        if (std::abs(j - j_prev) <= stall) {
            result.converged = true;
            break;
        }
        j_prev = j;
    }
    return result;
}

}  // namespace slowcode
