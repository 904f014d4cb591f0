#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowcode/core.hpp"

namespace slowcode {

enum class CodingKind { none, pair, mimo };

/// Slow-time coding applied to the victim (x) and interfering (y) radars.
/// mimo is reserved and rejected by synthesize_samples.
struct Coding {
    CodingKind kind = CodingKind::none;
    Code x;
    Code y;
};

struct SimScenario {
    FmcwParams params;
    std::vector<Emitter> emitters;
    Coding coding;
    /// Per-sample noise variance and the reference for emitter SNRs. 0 disables
    /// the noise and makes the reference 1.
    double noise_power = 1.0;
    std::uint64_t seed = 1;

    void validate() const;
};

/// 2 v / lambda for targets, v / lambda for interferers (one-way path).
double doppler_hz(const Emitter& e, const FmcwParams& params);
/// K tau + f_d, with tau = 2R/c for targets and R/c for interferers.
double beat_hz(const Emitter& e, const FmcwParams& params);

/// De-chirped samples, M (fast time) x N (slow time):
/// alpha exp(j 2 pi (f_B T_s m + f_d T_c n)) for m = 1..M, n = 1..N per emitter,
/// interferers multiplied by conj(x_n) y_{(n + l) mod N}, plus complex Gaussian noise.
/// |alpha|^2 = noise_power 10^(snr/10) (reference 1 when noiseless); each emitter
/// gets a seeded random phase.
CMatrix synthesize_samples(const SimScenario& sc);

enum class Window { none, hann };

/// 2-D FFT of the samples over range bin k (rows) and Doppler bin p (columns).
struct RangeDopplerMap {
    CMatrix values;
    double range_per_bin = 0.0;     ///< c f_s / (2 K pad_m), metres
    double velocity_per_bin = 0.0;  ///< lambda / (2 pad_n T_c), m/s

    [[nodiscard]] int pad_m() const { return static_cast<int>(values.rows()); }
    [[nodiscard]] int pad_n() const { return static_cast<int>(values.cols()); }
    /// Doppler bin mapped to [-pad_n/2, pad_n/2).
    [[nodiscard]] int signed_bin(int p) const;
    [[nodiscard]] double range_of(int k) const { return k * range_per_bin; }
    [[nodiscard]] double velocity_of(int p) const { return signed_bin(p) * velocity_per_bin; }
};

int next_pow2(int n);
/// next_pow2(M)
int default_pad_m(const FmcwParams& params);
/// 2 next_pow2(N): twice the Doppler resolution of the code length.
int default_pad_n(const FmcwParams& params);

/// pad sizes must be at least the sample dimensions. The window is applied
/// along each axis before its transform.
RangeDopplerMap range_doppler_map(const CMatrix& samples, const FmcwParams& params, int pad_m, int pad_n,
                                  Window window = Window::none);

/// Fractional (k, p) where an uncoded emitter peaks; p in [0, pad_n).
struct BinPosition {
    double k = 0.0;
    double p = 0.0;
};
BinPosition predicted_bin(const Emitter& e, const FmcwParams& params, int pad_m, int pad_n);

struct Peak {
    int k = 0;
    int p = 0;  ///< FFT bin in [0, pad_n)
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double db = 0.0;  ///< relative to the map maximum
};

/// The count largest local maxima (8-neighbourhood, Doppler wraps) in
/// descending order. A non-negative doppler_limit keeps only |signed p| <= limit.
std::vector<Peak> find_peaks(const RangeDopplerMap& map, int count, int doppler_limit = -1);

/// P_I / P_T at the receiver input in dB, losses ignored:
/// 4 pi R_T^4 G_tI G_rI / (G_T^2 R_I^2 sigma). Gains in dB, RCS in m^2.
double power_ratio_db(double r_t, double r_i, double g_t_db, double g_ti_db, double g_ri_db, double rcs = 1.0);

/// CSV "k,p,db" with dB relative to the map maximum.
void write_rd_csv(const RangeDopplerMap& map, const std::filesystem::path& path);
/// Little-endian float64 re/im pairs in row-major (k, p) order.
void write_rd_binary(const RangeDopplerMap& map, const std::filesystem::path& path);
/// Dimensions and bin metadata for the binary grid.
nlohmann::json rd_sidecar(const RangeDopplerMap& map);

nlohmann::json peaks_to_json(const std::vector<Peak>& peaks);

std::string to_string(CodingKind kind);
CodingKind coding_kind_from_string(const std::string& s);
std::string to_string(Window window);
Window window_from_string(const std::string& s);

}  // namespace slowcode
