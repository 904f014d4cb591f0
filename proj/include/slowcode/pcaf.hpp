#pragma once

#include <filesystem>
#include <vector>

#include "slowcode/core.hpp"

namespace slowcode {

/// Which code a quadratic-form matrix is used to optimize.
///
/// for_y-side matrices are built from y and optimize x:  x^H B x.
/// for_x-side matrices are built from x and optimize y:  y^H B y.
/// Both equal the summed PCAF energy of the pair.
enum class Side { for_x, for_y };

/// Result of applying the circular shift C_l: out[n] = z[(n + l) mod N].
/// C_{-l} = C_l^T, so negative lags shift the other way.
CVector shift_apply(const CVector& z, int lag);
CVector shift_apply(const Code& z, int lag);

/// f_p with f_p[n] = exp(-j*2*pi*(n+1)*p/N_f), n = 0..N-1.
CVector doppler_steering(int n_len, int p, int n_f);

/// Discrete periodic cross-ambiguity values r_{lp} on
/// l in {-(N-1)..N-1} x p in {-P..P}.
class PcafGrid {
public:
    PcafGrid(int n_len, int p_max, int n_f, CMatrix values);

    [[nodiscard]] int n_len() const noexcept { return n_len_; }
    [[nodiscard]] int p_max() const noexcept { return p_max_; }
    [[nodiscard]] int n_f() const noexcept { return n_f_; }
    [[nodiscard]] int max_lag() const noexcept { return n_len_ - 1; }
    [[nodiscard]] const CMatrix& values() const noexcept { return values_; }

    /// r_{lp}; throws InvalidLag / DomainError outside the grid.
    [[nodiscard]] cdouble at(int lag, int p) const;

private:
    int n_len_;
    int p_max_;
    int n_f_;
    CMatrix values_;  // row l + N - 1, column p + P
};

/// r_{lp} = sum_n conj(x_n) y_{(n+l) mod N} exp(-j*2*pi*(n+1)*p/N_f).
/// Evaluated with one zero-padded length-N_f FFT per lag.
PcafGrid pcaf_grid(const Code& x, const Code& y, int p_max, int n_f);
PcafGrid pcaf_grid(const CVector& x, const CVector& y, int p_max, int n_f);

/// Sum over the whole grid of |r_{lp}|^2.
double objective_siso(const Code& x, const Code& y, const DesignConfig& cfg);
double objective_siso(const CVector& x, const CVector& y, int p_max, int n_f);

struct QuadFormMatrix {
    CMatrix matrix;
    Side side;
};

/// Literal accumulation of the (2N-1)(2P+1) rank-one terms.
QuadFormMatrix build_B_naive(const Code& z, Side side, const DesignConfig& cfg);
CMatrix build_B_naive(const CVector& z, Side side, int p_max, int n_f);

/// Circulant/Hadamard assembly in O(N^2 + N log N).
///
/// for_y: R_y = 2 R_0 - y y^H with R_0 circulant in the periodic
///        autocorrelation of y; B_y = R_y .* (F_P F_P^H).
/// for_x: R_x = (x x^H) .* (F_P^* F_P^T); B_x = sum_l C_l^H R_x C_l, which
///        collapses to 2 circ(s) - R_x where s_d sums the d-th wrapped
///        diagonal of R_x.
QuadFormMatrix build_B_fast(const Code& z, Side side, const DesignConfig& cfg);
CMatrix build_B_fast(const CVector& z, Side side, int p_max, int n_f);

/// c_l = sum_n z_n conj(z_{(n+l) mod N}), l = 0..N-1, via FFT.
CVector periodic_autocorrelation(const CVector& z);

/// Real kernel (F_P F_P^H)[a,b] = sum_{p=-P}^{P} exp(-j*2*pi*(a-b)*p/N_f),
/// returned for a - b = -(N-1)..N-1 at index (a - b) + N - 1.
std::vector<double> dirichlet_gram_kernel(int n_len, int p_max, int n_f);

/// Dense F_P F_P^H, mainly for tests.
Eigen::MatrixXd dirichlet_gram(int n_len, int p_max, int n_f);

/// Writes `l,p,re,im` to complex_path and `l,p,db` (20 log10(|r|/N)) to db_path.
void write_pcaf_csv(const PcafGrid& grid, const std::filesystem::path& complex_path,
                    const std::filesystem::path& db_path);

/// Shared argument checks for the kernels above.
void check_grid_params(int n_len, int p_max, int n_f);

}  // namespace slowcode
