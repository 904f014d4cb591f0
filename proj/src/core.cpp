#include "slowcode/core.hpp"

#include <cmath>
#include <sstream>

namespace slowcode {

namespace {

void require_length(std::size_t n) {
    if (n < 2) {
        throw InvalidDimension("code length must be at least 2, got " + std::to_string(n));
    }
}

}  // namespace

Code Code::from_phases(std::vector<double> phases) {
    require_length(phases.size());
    CVector entries(static_cast<Eigen::Index>(phases.size()));
    for (std::size_t n = 0; n < phases.size(); ++n) {
        if (!std::isfinite(phases[n])) {
            throw ValidationError("phase " + std::to_string(n) + " is not finite");
        }
        entries[static_cast<Eigen::Index>(n)] = std::polar(1.0, phases[n]);
    }
    return Code(std::move(phases), std::move(entries));
}

Code Code::from_entries(const CVector& entries) {
    require_length(static_cast<std::size_t>(entries.size()));
    std::vector<double> phases(static_cast<std::size_t>(entries.size()));
    for (Eigen::Index n = 0; n < entries.size(); ++n) {
        const cdouble z = entries[n];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw ValidationError("entry " + std::to_string(n) + " is not finite");
        }
        const double dev = std::abs(std::abs(z) - 1.0);
        if (!(dev <= kUnimodularTol)) {
            std::ostringstream os;
            os << "entry " << n << " has magnitude " << std::abs(z) << ", expected 1";
            throw ValidationError(os.str());
        }
        phases[static_cast<std::size_t>(n)] = std::arg(z);
    }
    return Code(std::move(phases), entries);
}

Code Code::project(const CVector& entries) {
    std::vector<double> phases(static_cast<std::size_t>(entries.size()));
    for (Eigen::Index n = 0; n < entries.size(); ++n) {
        if (entries[n] == cdouble{}) {
            throw DomainError("cannot project a zero entry onto the unit circle");
        }
        phases[static_cast<std::size_t>(n)] = std::arg(entries[n]);
    }
    return from_phases(std::move(phases));
}

Code Code::ones(std::size_t n_len) {
    return from_phases(std::vector<double>(n_len, 0.0));
}

CodeSet::CodeSet(std::string label, std::vector<Code> codes)
    : label_(std::move(label)), codes_(std::move(codes)) {
    if (codes_.empty()) {
        throw InvalidDimension("code set '" + label_ + "' is empty");
    }
    for (const auto& c : codes_) {
        if (c.size() != codes_.front().size()) {
            throw ValidationError("code set '" + label_ + "' mixes code lengths " +
                                  std::to_string(codes_.front().size()) + " and " +
                                  std::to_string(c.size()));
        }
    }
}

void DesignConfig::validate() const {
    if (n_len < 2) throw ConfigError("n_len must be >= 2");
    if (n_f <= n_len) throw ConfigError("n_f must exceed n_len");
    if (p_max < 0 || p_max >= n_f) throw ConfigError("p_max must satisfy 0 <= p_max < n_f");
    if (!(outer_tol > 0.0)) throw ConfigError("outer_tol must be positive");
    if (!(inner_tol > 0.0)) throw ConfigError("inner_tol must be positive");
    if (outer_cap < 1 || inner_cap < 1) throw ConfigError("iteration caps must be >= 1");
}

void FmcwParams::validate() const {
    if (!(bandwidth > 0.0) || !(t_c > 0.0)) throw ConfigError("chirp slope must be positive");
    if (!(f_s > 0.0)) throw ConfigError("f_s must be positive");
    if (!(f_c > 0.0)) throw ConfigError("f_c must be positive");
    if (m_fast < 1) throw ConfigError("m_fast must be >= 1");
    if (n_slow < 2) throw ConfigError("n_slow must be >= 2");
}

void Emitter::validate() const {
    if (!(range_m > 0.0)) throw ConfigError("emitter range must be positive");
    if (!std::isfinite(speed_mps) || !std::isfinite(snr_db)) {
        throw ConfigError("emitter speed and snr must be finite");
    }
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return radius * std::cos(2.0 * kPi * u2);
}

cdouble Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t restart_seed(std::uint64_t base, int restart) {
    if (restart < 0) throw DomainError("restart index must be >= 0");
    return restart == 0 ? base : derive_seed(base, 0x100 + static_cast<std::uint64_t>(restart));
}

Code random_unimodular_code(int n_len, std::uint64_t seed) {
    if (n_len < 2) {
        throw InvalidDimension("code length must be at least 2, got " + std::to_string(n_len));
    }
    Rng rng(seed);
    std::vector<double> phases(static_cast<std::size_t>(n_len));
    for (auto& ph : phases) ph = rng.phase();
    return Code::from_phases(std::move(phases));
}

double unimodularity_error(const CVector& z) {
    double worst = 0.0;
    for (Eigen::Index n = 0; n < z.size(); ++n) {
        worst = std::max(worst, std::abs(std::abs(z[n]) - 1.0));
    }
    return worst;
}

std::string to_string(ZetaMode mode) { return mode == ZetaMode::analytic ? "analytic" : "exact"; }
std::string to_string(GammaMode mode) { return mode == GammaMode::frobenius ? "frobenius" : "exact"; }
std::string to_string(EmitterKind kind) { return kind == EmitterKind::target ? "target" : "interferer"; }

ZetaMode zeta_mode_from_string(const std::string& s) {
    if (s == "analytic") return ZetaMode::analytic;
    if (s == "exact") return ZetaMode::exact;
    throw ConfigError("unknown zeta_mode '" + s + "'");
}

GammaMode gamma_mode_from_string(const std::string& s) {
    if (s == "frobenius") return GammaMode::frobenius;
    if (s == "exact") return GammaMode::exact;
    throw ConfigError("unknown gamma_mode '" + s + "'");
}

std::string to_string(AuxInit init) { return init == AuxInit::random ? "random" : "closed_form"; }

AuxInit aux_init_from_string(const std::string& s) {
    if (s == "random") return AuxInit::random;
    if (s == "closed_form") return AuxInit::closed_form;
    throw ConfigError("unknown aux_init '" + s + "'");
}

EmitterKind emitter_kind_from_string(const std::string& s) {
    if (s == "target") return EmitterKind::target;
    if (s == "interferer") return EmitterKind::interferer;
    throw ConfigError("unknown emitter kind '" + s + "'");
}

}  // namespace slowcode
