#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowcode/pcaf.hpp"

namespace slowcode {

/// Reported value for a zero magnitude; keeps CSV output finite.
inline constexpr double kDbFloor = -300.0;

/// 20 log10(magnitude / reference), clamped below at kDbFloor.
double magnitude_db(double magnitude, double reference);

/// A set of (lag, Doppler bin) cells of a PCAF grid.
struct RegionSpec {
    std::optional<std::vector<int>> lags;  ///< nullopt: every lag
    int p_max = 0;                         ///< bins -p_max..p_max
    std::vector<std::pair<int, int>> exclusions;

    /// l = 0 and |p| <= p_max.
    static RegionSpec zero_delay(int p_max);
    /// Every lag and |p| <= p_max.
    static RegionSpec all_lags(int p_max);

    [[nodiscard]] bool contains(int lag, int p) const;

    /// Parses "lags=all|<l>|<a>..<b>;pmax=<P>[;exclude=<l>:<p>,...]".
    static RegionSpec parse(const std::string& text);
    [[nodiscard]] std::string to_string() const;
};

/// Cells of region, after exclusions, checked against the grid extent.
std::vector<std::pair<int, int>> region_cells(const PcafGrid& grid, const RegionSpec& region);

/// 20 log10(max |r_lp| / N) over the region.
double psl_db(const PcafGrid& grid, const RegionSpec& region);

/// Sum of |r_lp|^2 over the region.
double isl(const PcafGrid& grid, const RegionSpec& region);

/// 20 log10(|r_0p| / N) for p = -P..P.
std::vector<double> zero_delay_cut(const PcafGrid& grid);

void write_cut_csv(const std::vector<double>& cut_db, int p_max, const std::filesystem::path& path);

/// {psl_db, isl, region, code_labels}
nlohmann::json metrics_report(const PcafGrid& grid, const RegionSpec& region,
                              const std::vector<std::string>& code_labels);

}  // namespace slowcode
