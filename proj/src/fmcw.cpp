#include "slowcode/fmcw.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "slowcode/fft.hpp"

namespace slowcode {

namespace {

std::string emitter_name(std::size_t i, const Emitter& e) {
    return "emitter " + std::to_string(i) + " (" + to_string(e.kind) + ")";
}

std::vector<double> hann(int n) {
    std::vector<double> w(static_cast<std::size_t>(n), 1.0);
    if (n < 2) return w;
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / (n - 1));
    return w;
}

}  // namespace

void SimScenario::validate() const {
    params.validate();
    if (emitters.empty()) throw ConfigError("scenario needs at least one emitter");
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power)) throw ConfigError("noise_power must be >= 0");
    for (std::size_t i = 0; i < emitters.size(); ++i) {
        const Emitter& e = emitters[i];
        try {
            e.validate();
        } catch (const ConfigError& err) {
            throw ConfigError(emitter_name(i, e) + ": " + err.what());
        }
        if (std::abs(e.delay_lag) >= params.n_slow) {
            throw ConfigError(emitter_name(i, e) + ": delay_lag must satisfy |l| < n_slow");
        }
        const double f_b = beat_hz(e, params);
        if (!(f_b >= 0.0 && f_b < params.f_s / 2.0)) {
            throw ConfigError(emitter_name(i, e) + ": beat frequency " + std::to_string(f_b) +
                              " Hz is outside [0, f_s/2)");
        }
    }
    switch (coding.kind) {
        case CodingKind::none:
            break;
        case CodingKind::pair:
            if (static_cast<int>(coding.x.size()) != params.n_slow ||
                static_cast<int>(coding.y.size()) != params.n_slow) {
                throw ConfigError("code length must equal n_slow = " + std::to_string(params.n_slow));
            }
            break;
        case CodingKind::mimo:
            throw ConfigError("mimo coding is reserved and not simulated");
    }
}

double doppler_hz(const Emitter& e, const FmcwParams& params) {
    const double f = e.speed_mps / params.wavelength();
    return e.kind == EmitterKind::target ? 2.0 * f : f;
}

double beat_hz(const Emitter& e, const FmcwParams& params) {
    const double path = e.kind == EmitterKind::target ? 2.0 * e.range_m : e.range_m;
    return params.slope() * path / kSpeedOfLight + doppler_hz(e, params);
}

CMatrix synthesize_samples(const SimScenario& sc) {
    sc.validate();
    const int m_len = sc.params.m_fast;
    const int n_len = sc.params.n_slow;
    Rng rng(sc.seed);
    const double reference = sc.noise_power > 0.0 ? sc.noise_power : 1.0;

    CMatrix samples = CMatrix::Zero(m_len, n_len);
    for (const Emitter& e : sc.emitters) {
        const double amp = std::sqrt(reference * std::pow(10.0, e.snr_db / 10.0));
        const cdouble alpha = std::polar(amp, rng.phase());
        const double fb = beat_hz(e, sc.params) * sc.params.sample_period();
        const double fd = doppler_hz(e, sc.params) * sc.params.t_c;

        CVector slow(n_len);
        for (int n = 0; n < n_len; ++n) {
            slow[n] = std::polar(1.0, 2.0 * kPi * fd * (n + 1));
            if (e.kind == EmitterKind::interferer && sc.coding.kind == CodingKind::pair) {
                const int shifted = ((n + e.delay_lag) % n_len + n_len) % n_len;
                slow[n] *= std::conj(sc.coding.x[static_cast<std::size_t>(n)]) *
                           sc.coding.y[static_cast<std::size_t>(shifted)];
            }
        }
        CVector fast(m_len);
        for (int m = 0; m < m_len; ++m) fast[m] = alpha * std::polar(1.0, 2.0 * kPi * fb * (m + 1));
        samples += fast * slow.transpose();
    }
    if (sc.noise_power > 0.0) {
        const double sigma = std::sqrt(sc.noise_power);
        for (int n = 0; n < n_len; ++n) {
            for (int m = 0; m < m_len; ++m) samples(m, n) += sigma * rng.complex_normal();
        }
    }
    return samples;
}

int RangeDopplerMap::signed_bin(int p) const {
    const int n = pad_n();
    const int r = ((p % n) + n) % n;
    return r >= n / 2 ? r - n : r;
}

int next_pow2(int n) {
    if (n < 1) throw InvalidDimension("next_pow2 needs n >= 1");
    return static_cast<int>(std::bit_ceil(static_cast<unsigned>(n)));
}

int default_pad_m(const FmcwParams& params) { return next_pow2(params.m_fast); }

int default_pad_n(const FmcwParams& params) { return 2 * next_pow2(params.n_slow); }

RangeDopplerMap range_doppler_map(const CMatrix& samples, const FmcwParams& params, int pad_m, int pad_n,
                                  Window window) {
    params.validate();
    const auto m_len = static_cast<int>(samples.rows());
    const auto n_len = static_cast<int>(samples.cols());
    if (pad_m < m_len || pad_n < n_len) throw InvalidDimension("FFT sizes must be at least the sample dimensions");

    const std::vector<double> wm = window == Window::hann ? hann(m_len) : std::vector<double>(m_len, 1.0);
    const std::vector<double> wn = window == Window::hann ? hann(n_len) : std::vector<double>(n_len, 1.0);

    std::vector<cdouble> grid(static_cast<std::size_t>(pad_m) * static_cast<std::size_t>(pad_n));
    for (int m = 0; m < m_len; ++m) {
        for (int n = 0; n < n_len; ++n) {
            grid[static_cast<std::size_t>(m) * pad_n + n] =
                samples(m, n) * wm[static_cast<std::size_t>(m)] * wn[static_cast<std::size_t>(n)];
        }
    }
    const FftPlan plan(pad_m, pad_n, FftPlan::Direction::forward);
    std::vector<cdouble> spectrum(grid.size());
    plan.execute(grid, spectrum);

    RangeDopplerMap map;
    map.values.resize(pad_m, pad_n);
    for (int k = 0; k < pad_m; ++k) {
        for (int p = 0; p < pad_n; ++p) map.values(k, p) = spectrum[static_cast<std::size_t>(k) * pad_n + p];
    }
    map.range_per_bin = kSpeedOfLight * params.f_s / (2.0 * params.slope() * pad_m);
    map.velocity_per_bin = params.wavelength() / (2.0 * pad_n * params.t_c);
    return map;
}

BinPosition predicted_bin(const Emitter& e, const FmcwParams& params, int pad_m, int pad_n) {
    const double k = beat_hz(e, params) * params.sample_period() * pad_m;
    double p = std::fmod(doppler_hz(e, params) * params.t_c * pad_n, static_cast<double>(pad_n));
    if (p < 0.0) p += pad_n;
    return {k, p};
}

std::vector<Peak> find_peaks(const RangeDopplerMap& map, int count, int doppler_limit) {
    if (count < 1) throw ConfigError("peak count must be >= 1");
    const int rows = map.pad_m();
    const int cols = map.pad_n();
    const Eigen::MatrixXd mag = map.values.cwiseAbs();
    const double top = mag.maxCoeff();

    std::vector<Peak> peaks;
    for (int k = 0; k < rows; ++k) {
        for (int p = 0; p < cols; ++p) {
            if (doppler_limit >= 0 && std::abs(map.signed_bin(p)) > doppler_limit) continue;
            const double v = mag(k, p);
            bool is_max = v > 0.0;
            for (int dk = -1; dk <= 1 && is_max; ++dk) {
                const int kk = k + dk;
                if (kk < 0 || kk >= rows) continue;
                for (int dp = -1; dp <= 1; ++dp) {
                    if (dk == 0 && dp == 0) continue;
                    if (mag(kk, (p + dp + cols) % cols) > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (!is_max) continue;
            const double db = 20.0 * std::log10(v / top);
            peaks.push_back({k, p, map.range_of(k), map.velocity_of(p), db});
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.db > b.db; });
    if (peaks.size() > static_cast<std::size_t>(count)) peaks.resize(static_cast<std::size_t>(count));
    return peaks;
}

double power_ratio_db(double r_t, double r_i, double g_t_db, double g_ti_db, double g_ri_db, double rcs) {
    if (!(r_t > 0.0) || !(r_i > 0.0)) throw DomainError("ranges must be positive");
    if (!(rcs > 0.0)) throw DomainError("RCS must be positive");
    const double geometric = 4.0 * kPi * std::pow(r_t, 4) / (r_i * r_i * rcs);
    return 10.0 * std::log10(geometric) + g_ti_db + g_ri_db - 2.0 * g_t_db;
}

void write_rd_csv(const RangeDopplerMap& map, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    const double top = map.values.cwiseAbs().maxCoeff();
    out << "k,p,db\n";
    char line[64];
    for (int k = 0; k < map.pad_m(); ++k) {
        for (int p = 0; p < map.pad_n(); ++p) {
            const double mag = std::abs(map.values(k, p));
            const double db = mag > 0.0 && top > 0.0 ? std::max(-300.0, 20.0 * std::log10(mag / top)) : -300.0;
            std::snprintf(line, sizeof line, "%d,%d,%.17g\n", k, p, db);
            out << line;
        }
    }
    if (!out) throw Error("writing '" + path.string() + "' failed");
}

void write_rd_binary(const RangeDopplerMap& map, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    const auto put = [&](double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffU);
        out.write(bytes, sizeof bytes);
    };
    for (int k = 0; k < map.pad_m(); ++k) {
        for (int p = 0; p < map.pad_n(); ++p) {
            put(map.values(k, p).real());
            put(map.values(k, p).imag());
        }
    }
    if (!out) throw Error("writing '" + path.string() + "' failed");
}

nlohmann::json rd_sidecar(const RangeDopplerMap& map) {
    return {{"rows", map.pad_m()},
            {"cols", map.pad_n()},
            {"layout", "row-major (k, p), interleaved re/im"},
            {"dtype", "float64 little-endian"},
            {"range_per_bin_m", map.range_per_bin},
            {"velocity_per_bin_mps", map.velocity_per_bin},
            {"doppler_bins", "p >= cols/2 maps to p - cols"}};
}

nlohmann::json peaks_to_json(const std::vector<Peak>& peaks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pk : peaks) {
        arr.push_back({{"k", pk.k},
                       {"p", pk.p},
                       {"range_m", pk.range_m},
                       {"velocity_mps", pk.velocity_mps},
                       {"db", pk.db}});
    }
    return arr;
}

std::string to_string(CodingKind kind) {
    switch (kind) {
        case CodingKind::none:
            return "none";
        case CodingKind::pair:
            return "pair";
        case CodingKind::mimo:
            return "mimo";
    }
    return "none";
}

CodingKind coding_kind_from_string(const std::string& s) {
    if (s == "none") return CodingKind::none;
    if (s == "pair") return CodingKind::pair;
    if (s == "mimo") return CodingKind::mimo;
    throw ConfigError("unknown coding '" + s + "' (expected none, pair or mimo)");
}

std::string to_string(Window window) { return window == Window::hann ? "hann" : "none"; }

Window window_from_string(const std::string& s) {
    if (s == "none") return Window::none;
    if (s == "hann") return Window::hann;
    throw ConfigError("unknown window '" + s + "' (expected none or hann)");
}

}  // namespace slowcode
