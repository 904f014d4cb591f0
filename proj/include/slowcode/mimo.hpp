#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "slowcode/core.hpp"

namespace slowcode {

/// Which Hermitian part of A_{l,p}: A^r = (A + A^H)/2 or jA^i = j(A - A^H)/2.
enum class Part { real, imag };

/// Hermitian splitting of A_{l,p} = Diag(f_p) C_l over l = -(N-1)..N-1, p = -P..P,
/// with zeta loading and the square roots of the loaded matrices.
///
/// The square roots are cached when 2 (2N-1)(2P+1) N^2 complex values fit in
/// cfg.sqrt_cache_bytes; otherwise every access recomputes them.
class SplitOperators {
public:
    /// Throws LoadingError if some loaded matrix is not positive definite.
    static SplitOperators build(const DesignConfig& cfg);

    [[nodiscard]] int n_len() const noexcept { return n_len_; }
    [[nodiscard]] int p_max() const noexcept { return p_max_; }
    [[nodiscard]] int n_f() const noexcept { return n_f_; }
    [[nodiscard]] double zeta() const noexcept { return zeta_; }
    [[nodiscard]] bool cached() const noexcept { return !sqrt_cache_.empty(); }

    /// (2N-1)(2P+1)
    [[nodiscard]] std::size_t pair_count() const noexcept { return pair_count_; }
    /// Position of (l, p) in the row-major lag-by-bin ordering.
    [[nodiscard]] std::size_t index(int lag, int p) const;
    [[nodiscard]] std::pair<int, int> lag_bin(std::size_t index) const;

    [[nodiscard]] CMatrix A(int lag, int p) const;
    [[nodiscard]] CMatrix split(int lag, int p, Part part) const;
    /// split + zeta I
    [[nodiscard]] CMatrix tilde(int lag, int p, Part part) const;
    /// Hermitian positive-definite square root of tilde.
    [[nodiscard]] CMatrix sqrt(int lag, int p, Part part) const;

    /// Sum over (l, p) of tilde(l, p, real) + tilde(l, p, imag).
    [[nodiscard]] const CMatrix& loaded_sum() const noexcept { return loaded_sum_; }

    /// Calls fn(index, sqrt_real, sqrt_imag) for every (l, p) in index order.
    void for_each_sqrt(const std::function<void(std::size_t, const CMatrix&, const CMatrix&)>& fn) const;

private:
    SplitOperators() = default;
    [[nodiscard]] CMatrix compute_sqrt(int lag, int p, Part part) const;

    int n_len_ = 0;
    int p_max_ = 0;
    int n_f_ = 0;
    double zeta_ = 0.0;
    std::size_t pair_count_ = 0;
    CMatrix loaded_sum_;
    std::vector<CMatrix> sqrt_cache_;  ///< [2 * index + (part == imag)]
};

/// Bytes needed to cache every square root for cfg.
std::size_t sqrt_cache_size(const DesignConfig& cfg);

/// Unit-norm auxiliary vectors u (one per x_m) and v (one per y_k) for every
/// (l, p) and both parts. Stored flat as [code * pair_count + index].
struct AuxVectors {
    std::size_t pair_count = 0;
    std::size_t m_count = 0;
    std::size_t k_count = 0;
    std::vector<CVector> u_r, u_i, v_r, v_i;

    [[nodiscard]] const CVector& u(Part part, std::size_t m, std::size_t index) const;
    [[nodiscard]] const CVector& v(Part part, std::size_t k, std::size_t index) const;
};

/// Bytes held by the auxiliary vectors of an M x K design.
std::size_t aux_storage_size(const DesignConfig& cfg, std::size_t m_count, std::size_t k_count);

/// Complex normal vectors normalized to unit length, seeded.
AuxVectors random_aux(const SplitOperators& ops, std::size_t m_count, std::size_t k_count, std::uint64_t seed);

/// Closed-form optimum of every auxiliary vector: sqrt(tilde) z / ||sqrt(tilde) z||.
AuxVectors update_aux(std::span<const Code> x, std::span<const Code> y, const SplitOperators& ops);

/// Linear term s_z = -sqrt(zeta N) sum_{l,p,c} sqrt(tilde) w of the penalty of
/// one code whose auxiliary vectors are the closed form for z itself. Uses
/// sqrt(tilde) w = tilde z / sqrt(z^H tilde z), so no square root is formed.
CVector closed_form_linear_term(const Code& z, const SplitOperators& ops);

/// Components of Q(X, Y) summed over (l, p).
struct QuarticBreakdown {
    double x_self = 0.0;  ///< ||X^H A X||_F^2, including m = m'
    double y_self = 0.0;  ///< ||Y^H A Y||_F^2
    double cross = 0.0;   ///< ||X^H A Y||_F^2
    [[nodiscard]] double total() const { return x_self + y_self + cross; }
};

QuarticBreakdown quartic_objective(std::span<const Code> x, std::span<const Code> y, const DesignConfig& cfg);

/// Cross terms over ordered pairs m != m' within each set, all X-Y pairs, and
/// every ||sqrt(tilde) z - sqrt(zeta N) w||^2 penalty, evaluated term by term.
double surrogate_objective(std::span<const Code> x, std::span<const Code> y, const AuxVectors& aux,
                           const SplitOperators& ops, const DesignConfig& cfg);

enum class CodeRole { x, y };

/// Minimizes the surrogate over x_index (or y_index) with everything else held,
/// by PMLI on the (N+1)-dimensional augmented problem started at the current code.
/// Returns the current code unchanged when PMLI does not lower the separated objective.
Code update_code(CodeRole role, std::size_t index, std::span<const Code> x, std::span<const Code> y,
                 const AuxVectors& aux, const SplitOperators& ops, const DesignConfig& cfg);

struct MimoDesignResult {
    CodeSet x;
    CodeSet y;  ///< empty when K = 0
    /// Surrogate at the initialization followed by one value per outer iteration.
    std::vector<double> surrogate_trace;
    /// Q(X, Y) at the same points.
    std::vector<double> quartic_trace;
    int outer_iters = 0;
    bool converged = false;
    QuarticBreakdown breakdown;  ///< of the final codes
};

/// Cyclic design of M codes X and K codes Y. Each outer iteration updates
/// x_1..x_M, y_1..y_K, then all auxiliary vectors, and stops when the surrogate
/// changes by at most outer_tol times its initial value. Throws NumericalError
/// if it increases.
///
/// cfg.aux_init = random draws the auxiliary vectors from cfg.seed and stores
/// them. closed_form starts them at their optimum for X0, Y0; they then stay
/// closed-form images of the codes and are never stored.
MimoDesignResult design_mimo(const DesignConfig& cfg, std::span<const Code> x0, std::span<const Code> y0);

}  // namespace slowcode
