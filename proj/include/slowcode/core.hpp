#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slowcode/errors.hpp"

namespace slowcode {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Absolute tolerance on |z_n| - 1 accepted for a unimodular entry.
inline constexpr double kUnimodularTol = 1e-12;

/// A unimodular slow-time code of length N >= 2.
///
/// The phase array is the canonical representation (it is what codebook
/// files store); the complex entries are materialized once at construction.
class Code {
public:
    Code() = default;

    /// Builds exp(j*phase) for every phase. Phases must be finite.
    static Code from_phases(std::vector<double> phases);

    /// Validates |entries[n]| = 1 within kUnimodularTol.
    static Code from_entries(const CVector& entries);

    /// Projects arbitrary nonzero entries onto the unit circle.
    static Code project(const CVector& entries);

    static Code ones(std::size_t n_len);

    [[nodiscard]] std::size_t size() const noexcept { return phases_.size(); }
    [[nodiscard]] const CVector& entries() const noexcept { return entries_; }
    [[nodiscard]] const std::vector<double>& phases() const noexcept { return phases_; }
    [[nodiscard]] cdouble operator[](std::size_t n) const { return entries_[static_cast<Eigen::Index>(n)]; }

private:
    Code(std::vector<double> phases, CVector entries)
        : phases_(std::move(phases)), entries_(std::move(entries)) {}

    std::vector<double> phases_;
    CVector entries_;
};

/// M (or K) codes of a common length, one per transmit antenna.
class CodeSet {
public:
    CodeSet() = default;
    CodeSet(std::string label, std::vector<Code> codes);

    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] const std::vector<Code>& codes() const noexcept { return codes_; }
    [[nodiscard]] std::size_t count() const noexcept { return codes_.size(); }
    [[nodiscard]] std::size_t n_len() const noexcept { return codes_.empty() ? 0 : codes_.front().size(); }
    [[nodiscard]] const Code& operator[](std::size_t i) const { return codes_.at(i); }

private:
    std::string label_;
    std::vector<Code> codes_;
};

enum class ZetaMode { analytic, exact };
enum class GammaMode { frobenius, exact };
/// Initial MIMO auxiliary vectors: random unit vectors, or the closed-form
/// optimum for the initial codes.
enum class AuxInit { random, closed_form };

/// Parameters of a code design problem.
struct DesignConfig {
    int n_len = 64;       ///< N, pulses per CPI
    int p_max = 50;       ///< P, one-sided number of Doppler bins of interest
    int n_f = 128;        ///< N_f, total number of discrete Doppler frequencies
    double outer_tol = 1e-6;  ///< objective stall tolerance, relative to the initial objective
    int outer_cap = 1000;
    double inner_tol = 1e-6;  ///< max per-entry phase change (rad) that ends PMLI
    int inner_cap = 1000;
    std::uint64_t seed = 1;
    ZetaMode zeta_mode = ZetaMode::analytic;
    GammaMode gamma_mode = GammaMode::frobenius;
    AuxInit aux_init = AuxInit::random;
    /// Memory budget of the MIMO designer: square roots are cached when they fit,
    /// and explicit auxiliary vectors are refused by the CLI when they do not.
    std::size_t sqrt_cache_bytes = std::size_t{512} << 20;

    void validate() const;
};

/// FMCW front-end constants. The PRF is always derived from t_c.
struct FmcwParams {
    double f_c = 24e9;
    double bandwidth = 150e6;
    double t_c = 50e-6;
    double f_s = 4e6;
    int m_fast = 100;
    int n_slow = 256;

    [[nodiscard]] double slope() const { return bandwidth / t_c; }
    [[nodiscard]] double prf() const { return 1.0 / t_c; }
    [[nodiscard]] double wavelength() const { return kSpeedOfLight / f_c; }
    [[nodiscard]] double sample_period() const { return 1.0 / f_s; }

    void validate() const;
};

enum class EmitterKind { target, interferer };

/// A reflecting target (two-way path) or a direct-path interferer (one-way).
struct Emitter {
    double range_m = 0.0;
    double speed_mps = 0.0;
    double snr_db = 0.0;
    EmitterKind kind = EmitterKind::target;
    int delay_lag = 0;  ///< slow-time misalignment of the interfering code; unused for targets

    void validate() const;
};

/// Seeded generator whose streams are identical on every platform.
///
/// Only the raw mt19937_64 output is used; the conversions to uniform and
/// normal variates are done here because the std distributions are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller.
    double normal();
    /// Circularly-symmetric complex normal with E|z|^2 = 1.
    cdouble complex_normal();
    double phase() { return 2.0 * kPi * uniform(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// splitmix64 mix of (base, stream); used to derive independent seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Seed of restart r of a multi-start design: base itself for r = 0.
std::uint64_t restart_seed(std::uint64_t base, int restart);

/// Code with i.i.d. uniform phases on [0, 2*pi).
Code random_unimodular_code(int n_len, std::uint64_t seed);

/// Largest |  |z_n| - 1 |.
double unimodularity_error(const CVector& z);

std::string to_string(ZetaMode mode);
std::string to_string(GammaMode mode);
std::string to_string(AuxInit init);
std::string to_string(EmitterKind kind);
ZetaMode zeta_mode_from_string(const std::string& s);
GammaMode gamma_mode_from_string(const std::string& s);
AuxInit aux_init_from_string(const std::string& s);
EmitterKind emitter_kind_from_string(const std::string& s);

}  // namespace slowcode
