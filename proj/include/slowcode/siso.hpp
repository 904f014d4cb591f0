#pragma once

#include <utility>
#include <vector>

#include "slowcode/core.hpp"
#include "slowcode/pcaf.hpp"

namespace slowcode {

//----------------------------------------------------------------------------
// Doppler-shifting scheme
//----------------------------------------------------------------------------

/// x = all ones, y = (-1)^n (n = 0..N-1), i.e. [1,-1,1,...].
/// The pair is orthogonal for even N.
std::pair<Code, Code> doppler_shift_pair(int n_len);

/// |sin(N pi (f + 1/2)) / sin(pi (f + 1/2))| at f = p/N_f for p = 0..N_f-1.
std::vector<double> doppler_shift_cut(int n_len, int n_f);

/// Height of the first sidelobe of |sin(N pi f)/sin(pi f)|: 1/sin(3 pi/(2N)).
double doppler_shift_first_sidelobe(int n_len);

/// True when 4 f_d_max < f_r, so that a half-PRF shift separates every
/// interferer Doppler in [-f_d_max, f_d_max] from the same target band.
bool prf_condition_ok(const FmcwParams& params, double f_d_max);

//----------------------------------------------------------------------------
// Unimodular quadratic programs
//----------------------------------------------------------------------------

struct PmliOptions {
    double tol = 1e-6;  ///< stop when every phase moves less than this (rad)
    int cap = 1000;
    /// D is (N+1)x(N+1) and acts on [z; 1]; the trailing 1 is never updated.
    bool pinned_tail = false;
};

struct PmliResult {
    Code code;
    int iterations = 0;
    bool converged = false;
    /// z^H D z (augmented when pinned) before each update and after the last one.
    std::vector<double> objective_trace;
};

/// Maximizes z^H D z over unimodular z with z <- exp(j arg(D z)).
///
/// D must be Hermitian positive definite. A zero component of D z keeps the
/// previous phase. Throws LoadingError when the quadratic form is not positive
/// or decreases, both of which mean D was not loaded enough.
PmliResult pmli_solve(const CMatrix& d, const Code& z0, const PmliOptions& options = {});

/// Value strictly above the largest eigenvalue of Hermitian B.
/// frobenius: 1.001 * ||B||_F.  exact: dense eigensolve plus a 1e-3 relative margin.
double gamma_bound(const CMatrix& b, GammaMode mode = GammaMode::frobenius);

/// Re(z^H B z).
double quadratic_form(const CMatrix& b, const CVector& z);

//----------------------------------------------------------------------------
// Cyclic design of a code pair
//----------------------------------------------------------------------------

struct SisoOptions {
    /// Keep y fixed at y0 and optimize x only (no coordination between radars).
    bool single_sided = false;
};

struct SisoDesignResult {
    Code x;
    Code y;
    /// Objective at the initialization followed by one value per outer iteration.
    std::vector<double> objective_trace;
    int outer_iters = 0;
    bool converged = false;
};

/// Alternates PMLI on x^H (gamma_y I - B_y) x and y^H (gamma_x I - B_x) y
/// until the objective changes by at most outer_tol * J0 or outer_cap is hit.
/// Throws NumericalError if the objective ever increases.
SisoDesignResult design_siso(const DesignConfig& cfg, const Code& x0, const Code& y0,
                             const SisoOptions& options = {});

}  // namespace slowcode
