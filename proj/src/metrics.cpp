#include "slowcode/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace slowcode {

double magnitude_db(double magnitude, double reference) {
    if (!(magnitude > 0.0)) return kDbFloor;
    return std::max(kDbFloor, 20.0 * std::log10(magnitude / reference));
}

RegionSpec RegionSpec::zero_delay(int p_max) { return RegionSpec{std::vector<int>{0}, p_max, {}}; }

RegionSpec RegionSpec::all_lags(int p_max) { return RegionSpec{std::nullopt, p_max, {}}; }

bool RegionSpec::contains(int lag, int p) const {
    if (std::abs(p) > p_max) return false;
    if (lags && std::find(lags->begin(), lags->end(), lag) == lags->end()) return false;
    return std::find(exclusions.begin(), exclusions.end(), std::pair{lag, p}) == exclusions.end();
}

namespace {

int parse_int(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("region: bad integer '" + s + "' in " + what);
    }
    if (used != s.size()) throw ConfigError("region: bad integer '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

RegionSpec RegionSpec::parse(const std::string& text) {
    RegionSpec region;
    bool have_pmax = false;
    for (const auto& field : split(text, ';')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ConfigError("region: expected key=value, got '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "lags") {
            if (value == "all") {
                region.lags.reset();
            } else if (value.find(',') != std::string::npos) {
                std::vector<int> lags;
                for (const auto& item : split(value, ',')) lags.push_back(parse_int(item, "lags"));
                region.lags = std::move(lags);
            } else if (const auto dots = value.find(".."); dots != std::string::npos) {
                const int a = parse_int(value.substr(0, dots), "lags");
                const int b = parse_int(value.substr(dots + 2), "lags");
                if (b < a) throw ConfigError("region: empty lag range");
                std::vector<int> lags;
                for (int l = a; l <= b; ++l) lags.push_back(l);
                region.lags = std::move(lags);
            } else {
                region.lags = std::vector<int>{parse_int(value, "lags")};
            }
        } else if (key == "pmax") {
            region.p_max = parse_int(value, "pmax");
            if (region.p_max < 0) throw ConfigError("region: pmax must be >= 0");
            have_pmax = true;
        } else if (key == "exclude") {
            for (const auto& cell : split(value, ',')) {
                const auto colon = cell.find(':');
                if (colon == std::string::npos) throw ConfigError("region: exclusion must be l:p");
                region.exclusions.emplace_back(parse_int(cell.substr(0, colon), "exclude"),
                                               parse_int(cell.substr(colon + 1), "exclude"));
            }
        } else {
            throw ConfigError("region: unknown key '" + key + "'");
        }
    }
    if (!have_pmax) throw ConfigError("region: pmax is required");
    return region;
}

std::string RegionSpec::to_string() const {
    std::ostringstream os;
    os << "lags=";
    if (!lags) {
        os << "all";
    } else {
        bool contiguous = true;
        for (std::size_t i = 1; i < lags->size(); ++i) contiguous &= (*lags)[i] == (*lags)[i - 1] + 1;
        if (lags->size() == 1) {
            os << lags->front();
        } else if (contiguous) {
            os << lags->front() << ".." << lags->back();
        } else {
            for (std::size_t i = 0; i < lags->size(); ++i) os << (i ? "," : "") << (*lags)[i];
        }
    }
    os << ";pmax=" << p_max;
    if (!exclusions.empty()) {
        os << ";exclude=";
        for (std::size_t i = 0; i < exclusions.size(); ++i) {
            os << (i ? "," : "") << exclusions[i].first << ':' << exclusions[i].second;
        }
    }
    return os.str();
}

std::vector<std::pair<int, int>> region_cells(const PcafGrid& grid, const RegionSpec& region) {
    if (region.p_max > grid.p_max()) {
        throw DomainError("region pmax " + std::to_string(region.p_max) + " exceeds grid P " +
                          std::to_string(grid.p_max()));
    }
    std::vector<int> lags;
    if (region.lags) {
        lags = *region.lags;
        for (int l : lags) {
            if (std::abs(l) > grid.max_lag()) throw InvalidLag("region lag " + std::to_string(l) + " outside grid");
        }
    } else {
        for (int l = -grid.max_lag(); l <= grid.max_lag(); ++l) lags.push_back(l);
    }
    for (const auto& [l, p] : region.exclusions) {
        const bool in_lags = std::find(lags.begin(), lags.end(), l) != lags.end();
        if (!in_lags || std::abs(p) > region.p_max) {
            throw DomainError("exclusion (" + std::to_string(l) + "," + std::to_string(p) + ") is outside the region");
        }
    }
    std::vector<std::pair<int, int>> cells;
    for (int l : lags) {
        for (int p = -region.p_max; p <= region.p_max; ++p) {
            if (region.contains(l, p)) cells.emplace_back(l, p);
        }
    }
    if (cells.empty()) throw DomainError("region is empty after exclusions");
    return cells;
}

double psl_db(const PcafGrid& grid, const RegionSpec& region) {
    double peak = 0.0;
    for (const auto& [l, p] : region_cells(grid, region)) peak = std::max(peak, std::abs(grid.at(l, p)));
    return magnitude_db(peak, grid.n_len());
}

double isl(const PcafGrid& grid, const RegionSpec& region) {
    double acc = 0.0;
    for (const auto& [l, p] : region_cells(grid, region)) acc += std::norm(grid.at(l, p));
    return acc;
}

std::vector<double> zero_delay_cut(const PcafGrid& grid) {
    std::vector<double> cut;
    cut.reserve(static_cast<std::size_t>(2 * grid.p_max() + 1));
    for (int p = -grid.p_max(); p <= grid.p_max(); ++p) {
        cut.push_back(magnitude_db(std::abs(grid.at(0, p)), grid.n_len()));
    }
    return cut;
}

void write_cut_csv(const std::vector<double>& cut_db, int p_max, const std::filesystem::path& path) {
    if (cut_db.size() != static_cast<std::size_t>(2 * p_max + 1)) throw InvalidDimension("cut length mismatch");
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << "p,db\n";
    char line[64];
    for (int p = -p_max; p <= p_max; ++p) {
        std::snprintf(line, sizeof line, "%d,%.17g\n", p, cut_db[static_cast<std::size_t>(p + p_max)]);
        out << line;
    }
}

nlohmann::json metrics_report(const PcafGrid& grid, const RegionSpec& region,
                              const std::vector<std::string>& code_labels) {
    return {{"psl_db", psl_db(grid, region)},
            {"isl", isl(grid, region)},
            {"region", region.to_string()},
            {"code_labels", code_labels}};
}

}  // namespace slowcode
