#include "slowcode/mimo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "slowcode/fft.hpp"
#include "slowcode/pcaf.hpp"
#include "slowcode/siso.hpp"

namespace slowcode {

namespace {

Eigen::Index wrap(Eigen::Index i, Eigen::Index n) {
    const Eigen::Index r = i % n;
    return r < 0 ? r + n : r;
}

std::size_t pairs_for(const DesignConfig& cfg) {
    return static_cast<std::size_t>(2 * cfg.n_len - 1) * static_cast<std::size_t>(2 * cfg.p_max + 1);
}

void check_codes(std::span<const Code> codes, int n_len, const char* name) {
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (static_cast<int>(codes[i].size()) != n_len) {
            throw InvalidDimension(std::string(name) + "[" + std::to_string(i) + "] has length " +
                                   std::to_string(codes[i].size()) + ", expected " + std::to_string(n_len));
        }
    }
}

CMatrix split_of(const CMatrix& a, Part part) {
    if (part == Part::real) return 0.5 * (a + a.adjoint());
    return cdouble(0.0, 0.5) * (a - a.adjoint());
}

}  // namespace

std::size_t sqrt_cache_size(const DesignConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.n_len);
    return 2 * pairs_for(cfg) * n * n * sizeof(cdouble);
}

std::size_t aux_storage_size(const DesignConfig& cfg, std::size_t m_count, std::size_t k_count) {
    return 2 * (m_count + k_count) * pairs_for(cfg) * static_cast<std::size_t>(cfg.n_len) * sizeof(cdouble);
}

SplitOperators SplitOperators::build(const DesignConfig& cfg) {
    cfg.validate();
    SplitOperators ops;
    ops.n_len_ = cfg.n_len;
    ops.p_max_ = cfg.p_max;
    ops.n_f_ = cfg.n_f;
    ops.pair_count_ = pairs_for(cfg);
    const int n = cfg.n_len;

    if (cfg.zeta_mode == ZetaMode::analytic) {
        // A_{l,p} is unitary, so both Hermitian parts have eigenvalues in [-1, 1].
        ops.zeta_ = 1.01;
    } else {
        double lmin = std::numeric_limits<double>::infinity();
        for (int lag = -(n - 1); lag <= n - 1; ++lag) {
            for (int p = -cfg.p_max; p <= cfg.p_max; ++p) {
                const CMatrix a = ops.A(lag, p);
                for (Part part : {Part::real, Part::imag}) {
                    Eigen::SelfAdjointEigenSolver<CMatrix> solver(split_of(a, part), Eigen::EigenvaluesOnly);
                    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed computing zeta");
                    lmin = std::min(lmin, solver.eigenvalues().minCoeff());
                }
            }
        }
        ops.zeta_ = 1.01 * std::max(0.0, -lmin) + 1e-3;
    }

    // sum of A^r + jA^i = ((1 + j) A + (1 - j) A^H) / 2, summed over (l, p)
    CMatrix sum_a = CMatrix::Zero(n, n);
    for (int p = -cfg.p_max; p <= cfg.p_max; ++p) {
        const CVector f = doppler_steering(n, p, cfg.n_f);
        for (int lag = -(n - 1); lag <= n - 1; ++lag) {
            for (int row = 0; row < n; ++row) sum_a(row, wrap(row + lag, n)) += f[row];
        }
    }
    ops.loaded_sum_ = cdouble(0.5, 0.5) * sum_a + cdouble(0.5, -0.5) * sum_a.adjoint();
    ops.loaded_sum_ = 0.5 * (ops.loaded_sum_ + ops.loaded_sum_.adjoint()).eval();
    ops.loaded_sum_.diagonal().array() += 2.0 * ops.zeta_ * static_cast<double>(ops.pair_count_);

    if (sqrt_cache_size(cfg) <= cfg.sqrt_cache_bytes) {
        std::vector<CMatrix> cache;
        cache.reserve(2 * ops.pair_count_);
        for (std::size_t idx = 0; idx < ops.pair_count_; ++idx) {
            const auto [lag, p] = ops.lag_bin(idx);
            cache.push_back(ops.compute_sqrt(lag, p, Part::real));
            cache.push_back(ops.compute_sqrt(lag, p, Part::imag));
        }
        ops.sqrt_cache_ = std::move(cache);
    }
    return ops;
}

std::size_t SplitOperators::index(int lag, int p) const {
    if (std::abs(lag) >= n_len_) throw InvalidLag("lag " + std::to_string(lag) + " outside +-(N-1)");
    if (std::abs(p) > p_max_) throw DomainError("Doppler bin " + std::to_string(p) + " outside +-P");
    return static_cast<std::size_t>(lag + n_len_ - 1) * static_cast<std::size_t>(2 * p_max_ + 1) +
           static_cast<std::size_t>(p + p_max_);
}

std::pair<int, int> SplitOperators::lag_bin(std::size_t index) const {
    if (index >= pair_count_) throw DomainError("operator index out of range");
    const auto bins = static_cast<std::size_t>(2 * p_max_ + 1);
    return {static_cast<int>(index / bins) - (n_len_ - 1), static_cast<int>(index % bins) - p_max_};
}

CMatrix SplitOperators::A(int lag, int p) const {
    static_cast<void>(index(lag, p));
    const CVector f = doppler_steering(n_len_, p, n_f_);
    CMatrix a = CMatrix::Zero(n_len_, n_len_);
    for (int row = 0; row < n_len_; ++row) a(row, wrap(row + lag, n_len_)) = f[row];
    return a;
}

CMatrix SplitOperators::split(int lag, int p, Part part) const { return split_of(A(lag, p), part); }

CMatrix SplitOperators::tilde(int lag, int p, Part part) const {
    CMatrix t = split(lag, p, part);
    t.diagonal().array() += zeta_;
    return t;
}

CMatrix SplitOperators::compute_sqrt(int lag, int p, Part part) const {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(tilde(lag, p, part));
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on a loaded split matrix");
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    if (!(lambda.minCoeff() > 0.0)) {
        throw LoadingError("loaded split matrix at (l=" + std::to_string(lag) + ", p=" + std::to_string(p) +
                           ") is not positive definite; min eigenvalue " + std::to_string(lambda.minCoeff()));
    }
    const CMatrix& v = solver.eigenvectors();
    CMatrix root = v * lambda.cwiseSqrt().asDiagonal() * v.adjoint();
    return 0.5 * (root + root.adjoint());
}

CMatrix SplitOperators::sqrt(int lag, int p, Part part) const {
    const std::size_t idx = index(lag, p);
    if (cached()) return sqrt_cache_[2 * idx + (part == Part::imag ? 1 : 0)];
    return compute_sqrt(lag, p, part);
}

void SplitOperators::for_each_sqrt(
    const std::function<void(std::size_t, const CMatrix&, const CMatrix&)>& fn) const {
    for (std::size_t idx = 0; idx < pair_count_; ++idx) {
        if (cached()) {
            fn(idx, sqrt_cache_[2 * idx], sqrt_cache_[2 * idx + 1]);
        } else {
            const auto [lag, p] = lag_bin(idx);
            fn(idx, compute_sqrt(lag, p, Part::real), compute_sqrt(lag, p, Part::imag));
        }
    }
}

const CVector& AuxVectors::u(Part part, std::size_t m, std::size_t index) const {
    if (m >= m_count || index >= pair_count) throw DomainError("aux index out of range");
    return (part == Part::real ? u_r : u_i)[m * pair_count + index];
}

const CVector& AuxVectors::v(Part part, std::size_t k, std::size_t index) const {
    if (k >= k_count || index >= pair_count) throw DomainError("aux index out of range");
    return (part == Part::real ? v_r : v_i)[k * pair_count + index];
}

AuxVectors random_aux(const SplitOperators& ops, std::size_t m_count, std::size_t k_count, std::uint64_t seed) {
    Rng rng(seed);
    const int n = ops.n_len();
    const auto draw = [&](std::size_t count) {
        std::vector<CVector> out(count);
        for (auto& w : out) {
            w.resize(n);
            for (int i = 0; i < n; ++i) w[i] = rng.complex_normal();
            w /= w.norm();
        }
        return out;
    };
    AuxVectors aux;
    aux.pair_count = ops.pair_count();
    aux.m_count = m_count;
    aux.k_count = k_count;
    aux.u_r = draw(m_count * aux.pair_count);
    aux.u_i = draw(m_count * aux.pair_count);
    aux.v_r = draw(k_count * aux.pair_count);
    aux.v_i = draw(k_count * aux.pair_count);
    return aux;
}

namespace {

/// Refreshes every auxiliary vector to its closed form and, when requested,
/// accumulates the linear terms s_z = -sqrt(zeta N) sum sqrt(tilde) w of the
/// refreshed vectors. One pass over the square roots.
void refresh_aux(std::span<const Code> x, std::span<const Code> y, const SplitOperators& ops, AuxVectors& aux,
                 std::vector<CVector>* terms) {
    const std::size_t pairs = ops.pair_count();
    aux.pair_count = pairs;
    aux.m_count = x.size();
    aux.k_count = y.size();
    aux.u_r.assign(x.size() * pairs, CVector());
    aux.u_i.assign(x.size() * pairs, CVector());
    aux.v_r.assign(y.size() * pairs, CVector());
    aux.v_i.assign(y.size() * pairs, CVector());
    if (terms) terms->assign(x.size() + y.size(), CVector::Zero(ops.n_len()));

    const auto unit = [](const CVector& a) {
        const double nrm = a.norm();
        if (!(nrm > 0.0)) throw NumericalError("zero image under a loaded square root");
        return CVector(a / nrm);
    };
    ops.for_each_sqrt([&](std::size_t idx, const CMatrix& s_r, const CMatrix& s_i) {
        for (std::size_t c = 0; c < x.size() + y.size(); ++c) {
            const bool is_x = c < x.size();
            const std::size_t j = is_x ? c : c - x.size();
            const CVector& z = is_x ? x[j].entries() : y[j].entries();
            CVector w_r = unit(s_r * z);
            CVector w_i = unit(s_i * z);
            if (terms) (*terms)[c] += s_r * w_r + s_i * w_i;
            auto& store_r = is_x ? aux.u_r : aux.v_r;
            auto& store_i = is_x ? aux.u_i : aux.v_i;
            store_r[j * pairs + idx] = std::move(w_r);
            store_i[j * pairs + idx] = std::move(w_i);
        }
    });
    if (terms) {
        const double scale = -std::sqrt(ops.zeta() * ops.n_len());
        for (auto& s : *terms) s *= scale;
    }
}

/// s_z for every code (x first, then y) from the stored auxiliary vectors.
std::vector<CVector> linear_terms(const AuxVectors& aux, const SplitOperators& ops) {
    const std::size_t codes = aux.m_count + aux.k_count;
    std::vector<CVector> terms(codes, CVector::Zero(ops.n_len()));
    ops.for_each_sqrt([&](std::size_t idx, const CMatrix& s_r, const CMatrix& s_i) {
        for (std::size_t c = 0; c < codes; ++c) {
            const bool is_x = c < aux.m_count;
            const std::size_t j = is_x ? c : c - aux.m_count;
            const Part r = Part::real;
            const Part i = Part::imag;
            terms[c] += is_x ? CVector(s_r * aux.u(r, j, idx) + s_i * aux.u(i, j, idx))
                             : CVector(s_r * aux.v(r, j, idx) + s_i * aux.v(i, j, idx));
        }
    });
    const double scale = -std::sqrt(ops.zeta() * ops.n_len());
    for (auto& s : terms) s *= scale;
    return terms;
}

double cross_terms(std::span<const Code> x, std::span<const Code> y, const DesignConfig& cfg) {
    double acc = 0.0;
    const auto within = [&](std::span<const Code> set) {
        for (std::size_t a = 0; a < set.size(); ++a) {
            for (std::size_t b = 0; b < set.size(); ++b) {
                if (a != b) acc += objective_siso(set[a], set[b], cfg);
            }
        }
    };
    within(x);
    within(y);
    for (const auto& xm : x) {
        for (const auto& yk : y) acc += objective_siso(xm, yk, cfg);
    }
    return acc;
}

/// z^H R z + 2 Re(z^H s)
double separated_value(const CMatrix& r, const CVector& s, const CVector& z) {
    return quadratic_form(r, z) + 2.0 * z.dot(s).real();
}

/// Sum over (l, p, part) of the penalty for one code, given its linear term.
double penalty_value(const SplitOperators& ops, const CVector& s, const CVector& z) {
    return separated_value(ops.loaded_sum(), s, z) +
           2.0 * static_cast<double>(ops.pair_count()) * ops.zeta() * ops.n_len();
}

double fast_surrogate(std::span<const Code> x, std::span<const Code> y, const std::vector<CVector>& terms,
                      const SplitOperators& ops, const DesignConfig& cfg) {
    double acc = cross_terms(x, y, cfg);
    for (std::size_t m = 0; m < x.size(); ++m) acc += penalty_value(ops, terms[m], x[m].entries());
    for (std::size_t k = 0; k < y.size(); ++k) acc += penalty_value(ops, terms[x.size() + k], y[k].entries());
    return acc;
}

CMatrix coupling_matrix(CodeRole role, std::size_t index, std::span<const Code> x, std::span<const Code> y,
                        const SplitOperators& ops, const DesignConfig& cfg) {
    CMatrix r = ops.loaded_sum();
    const auto& own = role == CodeRole::x ? x : y;
    const auto& other = role == CodeRole::x ? y : x;
    // A code of the same set appears on both sides of the PCAF.
    for (std::size_t j = 0; j < own.size(); ++j) {
        if (j == index) continue;
        r += build_B_fast(own[j].entries(), Side::for_y, cfg.p_max, cfg.n_f);
        r += build_B_fast(own[j].entries(), Side::for_x, cfg.p_max, cfg.n_f);
    }
    // x_m is always the left code of an X-Y pair and y_k the right one.
    const Side side = role == CodeRole::x ? Side::for_y : Side::for_x;
    for (const auto& z : other) r += build_B_fast(z.entries(), side, cfg.p_max, cfg.n_f);
    return r;
}

Code solve_block(const CMatrix& r, const CVector& s, const Code& z, const DesignConfig& cfg) {
    const Eigen::Index n = r.rows();
    CMatrix b = CMatrix::Zero(n + 1, n + 1);
    b.topLeftCorner(n, n) = r;
    b.topRightCorner(n, 1) = s;
    b.bottomLeftCorner(1, n) = s.adjoint();
    CMatrix d = -b;
    d.diagonal().array() += gamma_bound(b, cfg.gamma_mode);
    const PmliResult res = pmli_solve(d, z, {cfg.inner_tol, cfg.inner_cap, true});
    const double before = separated_value(r, s, z.entries());
    const double after = separated_value(r, s, res.code.entries());
    return after < before - 1e-13 * std::abs(before) ? res.code : z;
}

void check_sizes(std::span<const Code> x, std::span<const Code> y, const DesignConfig& cfg) {
    check_codes(x, cfg.n_len, "X");
    check_codes(y, cfg.n_len, "Y");
}

}  // namespace

CVector closed_form_linear_term(const Code& z, const SplitOperators& ops) {
    const int n = ops.n_len();
    const int p_max = ops.p_max();
    const int n_f = ops.n_f();
    if (static_cast<int>(z.size()) != n) throw InvalidDimension("code length does not match the operators");
    const CVector& zv = z.entries();
    const double zn = ops.zeta() * n;

    // z^H A z = r, z^H A^r z = Re r, z^H jA^i z = -Im r
    const PcafGrid grid = pcaf_grid(zv, zv, p_max, n_f);
    const FftPlan plan(n_f, FftPlan::Direction::forward);
    std::vector<cdouble> ca(static_cast<std::size_t>(n_f));
    std::vector<cdouble> cb(static_cast<std::size_t>(n_f));
    std::vector<cdouble> sa(static_cast<std::size_t>(n_f));
    std::vector<cdouble> sb(static_cast<std::size_t>(n_f));

    // tilde^r z / n_r + tilde^i z / n_i = A z (w_r + j w_i)/2 + A^H z (w_r - j w_i)/2 + zeta z (w_r + w_i)
    CVector acc = CVector::Zero(n);
    double diag = 0.0;
    for (int lag = -(n - 1); lag <= n - 1; ++lag) {
        std::fill(ca.begin(), ca.end(), cdouble{});
        std::fill(cb.begin(), cb.end(), cdouble{});
        for (int p = -p_max; p <= p_max; ++p) {
            const cdouble r = grid.at(lag, p);
            const double q_r = r.real() + zn;
            const double q_i = -r.imag() + zn;
            if (!(q_r > 0.0) || !(q_i > 0.0)) throw NumericalError("loaded quadratic form is not positive");
            const double w_r = 1.0 / std::sqrt(q_r);
            const double w_i = 1.0 / std::sqrt(q_i);
            const auto slot = static_cast<std::size_t>(wrap(p, n_f));
            ca[slot] += cdouble(0.5 * w_r, 0.5 * w_i);
            cb[slot] += cdouble(0.5 * w_r, -0.5 * w_i);
            diag += w_r + w_i;
        }
        // sum_p c_p exp(-+j 2 pi p (n+1) / N_f) read off the forward transform
        plan.execute(ca, sa);
        plan.execute(cb, sb);
        for (int i = 0; i < n; ++i) {
            const auto plus = static_cast<std::size_t>(wrap(i + 1, n_f));
            const auto minus = static_cast<std::size_t>(wrap(-(i + 1), n_f));
            const Eigen::Index j = wrap(i + lag, n);
            acc[i] += sa[plus] * zv[j];          // (A z)[i] = f_p[i] z[i + l]
            acc[j] += sb[minus] * zv[i];         // (A^H z)[i + l] = conj(f_p[i]) z[i]
        }
    }
    acc += ops.zeta() * diag * zv;
    return -std::sqrt(zn) * acc;
}

AuxVectors update_aux(std::span<const Code> x, std::span<const Code> y, const SplitOperators& ops) {
    check_codes(x, ops.n_len(), "X");
    check_codes(y, ops.n_len(), "Y");
    AuxVectors aux;
    refresh_aux(x, y, ops, aux, nullptr);
    return aux;
}

QuarticBreakdown quartic_objective(std::span<const Code> x, std::span<const Code> y, const DesignConfig& cfg) {
    check_sizes(x, y, cfg);
    QuarticBreakdown q;
    for (const auto& a : x) {
        for (const auto& b : x) q.x_self += objective_siso(a, b, cfg);
    }
    for (const auto& a : y) {
        for (const auto& b : y) q.y_self += objective_siso(a, b, cfg);
    }
    for (const auto& a : x) {
        for (const auto& b : y) q.cross += objective_siso(a, b, cfg);
    }
    return q;
}

double surrogate_objective(std::span<const Code> x, std::span<const Code> y, const AuxVectors& aux,
                           const SplitOperators& ops, const DesignConfig& cfg) {
    check_sizes(x, y, cfg);
    if (aux.m_count != x.size() || aux.k_count != y.size() || aux.pair_count != ops.pair_count()) {
        throw InvalidDimension("auxiliary vectors do not match the code sets");
    }
    const double root = std::sqrt(ops.zeta() * ops.n_len());
    double penalty = 0.0;
    ops.for_each_sqrt([&](std::size_t idx, const CMatrix& s_r, const CMatrix& s_i) {
        for (std::size_t m = 0; m < x.size(); ++m) {
            penalty += (s_r * x[m].entries() - root * aux.u(Part::real, m, idx)).squaredNorm();
            penalty += (s_i * x[m].entries() - root * aux.u(Part::imag, m, idx)).squaredNorm();
        }
        for (std::size_t k = 0; k < y.size(); ++k) {
            penalty += (s_r * y[k].entries() - root * aux.v(Part::real, k, idx)).squaredNorm();
            penalty += (s_i * y[k].entries() - root * aux.v(Part::imag, k, idx)).squaredNorm();
        }
    });
    return cross_terms(x, y, cfg) + penalty;
}

Code update_code(CodeRole role, std::size_t index, std::span<const Code> x, std::span<const Code> y,
                 const AuxVectors& aux, const SplitOperators& ops, const DesignConfig& cfg) {
    check_sizes(x, y, cfg);
    const auto& own = role == CodeRole::x ? x : y;
    if (index >= own.size()) throw DomainError("code index " + std::to_string(index) + " out of range");
    if (aux.m_count != x.size() || aux.k_count != y.size()) {
        throw InvalidDimension("auxiliary vectors do not match the code sets");
    }
    const auto terms = linear_terms(aux, ops);
    const std::size_t slot = role == CodeRole::x ? index : x.size() + index;
    return solve_block(coupling_matrix(role, index, x, y, ops, cfg), terms[slot], own[index], cfg);
}

MimoDesignResult design_mimo(const DesignConfig& cfg, std::span<const Code> x0, std::span<const Code> y0) {
    cfg.validate();
    if (x0.empty()) throw InvalidDimension("at least one X code is required");
    check_sizes(x0, y0, cfg);

    std::vector<Code> x(x0.begin(), x0.end());
    std::vector<Code> y(y0.begin(), y0.end());
    const SplitOperators ops = SplitOperators::build(cfg);
    const bool explicit_aux = cfg.aux_init == AuxInit::random;
    AuxVectors aux;
    std::vector<CVector> terms;
    const auto closed_form_terms = [&] {
        terms.clear();
        for (const auto& z : x) terms.push_back(closed_form_linear_term(z, ops));
        for (const auto& z : y) terms.push_back(closed_form_linear_term(z, ops));
    };
    if (explicit_aux) {
        aux = random_aux(ops, x.size(), y.size(), derive_seed(cfg.seed, 0xa0));
        terms = linear_terms(aux, ops);
    } else {
        closed_form_terms();
    }

    MimoDesignResult result;
    const double j0 = fast_surrogate(x, y, terms, ops, cfg);
    result.surrogate_trace.push_back(j0);
    result.quartic_trace.push_back(quartic_objective(x, y, cfg).total());
    const double stall = cfg.outer_tol * std::max(j0, 1e-300);
    double j_prev = j0;

    for (int s = 1; s <= cfg.outer_cap; ++s) {
        for (std::size_t m = 0; m < x.size(); ++m) {
            x[m] = solve_block(coupling_matrix(CodeRole::x, m, x, y, ops, cfg), terms[m], x[m], cfg);
        }
        for (std::size_t k = 0; k < y.size(); ++k) {
            y[k] = solve_block(coupling_matrix(CodeRole::y, k, x, y, ops, cfg), terms[x.size() + k], y[k], cfg);
        }
        if (explicit_aux) {
            refresh_aux(x, y, ops, aux, &terms);
        } else {
            closed_form_terms();
        }

        const double j = fast_surrogate(x, y, terms, ops, cfg);
        if (j > j_prev + 1e-8 * std::max(1.0, j_prev)) {
            throw NumericalError("MIMO surrogate increased from " + std::to_string(j_prev) + " to " +
                                 std::to_string(j) + " at outer iteration " + std::to_string(s));
        }
        result.surrogate_trace.push_back(j);
        result.quartic_trace.push_back(quartic_objective(x, y, cfg).total());
        result.outer_iters = s;
        if (std::abs(j - j_prev) <= stall) {
            result.converged = true;
            break;
        }
        j_prev = j;
    }

    result.breakdown = quartic_objective(x, y, cfg);
    result.x = CodeSet("X", std::move(x));
    if (!y.empty()) result.y = CodeSet("Y", std::move(y));
    return result;
}

}  // namespace slowcode
