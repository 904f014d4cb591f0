#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <mutex>
#include <set>
#include <thread>

#include "manifest.hpp"
#include "slowcode/fmcw.hpp"
#include "slowcode/metrics.hpp"
#include "slowcode/mimo.hpp"
#include "slowcode/pcaf.hpp"
#include "slowcode/serialization.hpp"
#include "slowcode/siso.hpp"

namespace slowcode::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::mutex progress_mutex;

void progress(const std::string& line) {
    const std::lock_guard lock(progress_mutex);
    std::fprintf(stderr, "%s\n", line.c_str());
    std::fflush(stderr);
}

void prepare_out(const fs::path& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw ConfigError("cannot create output directory '" + out.string() + "'");
}

void emit_json(RunManifest& manifest, const fs::path& path, const json& doc) {
    write_json_file(path, doc);
    manifest.add_output(path);
}

/// Runs fn(0..count-1) on up to hardware_concurrency threads and returns the
/// results in restart order.
template <class Fn>
auto run_restarts(int count, Fn fn) {
    using Result = decltype(fn(0));
    const int width = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    std::vector<Result> results;
    results.reserve(static_cast<std::size_t>(count));
    for (int start = 0; start < count; start += width) {
        std::vector<std::future<Result>> batch;
        for (int r = start; r < std::min(count, start + width); ++r) batch.push_back(std::async(std::launch::async, fn, r));
        for (auto& f : batch) results.push_back(f.get());
    }
    return results;
}

/// Lowest final value; ties go to the earlier restart.
template <class T, class Key>
std::size_t best_index(const std::vector<T>& runs, Key key) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (key(runs[i]) < key(runs[best])) best = i;
    }
    return best;
}

DesignConfig load_design_config(const fs::path& path, RunManifest& manifest) {
    const DesignConfig cfg = design_config_from_json(read_json_file(path));
    cfg.validate();
    manifest.add_input(path);
    manifest.set_config(to_json(cfg));
    return cfg;
}

json design_block(const DesignConfig& cfg, const std::string& kind) {
    return {{"kind", kind}, {"n_len", cfg.n_len}, {"p_max", cfg.p_max}, {"n_f", cfg.n_f}, {"seed", cfg.seed}};
}

json codebook_doc(std::span<const CodeSet> sets, json design) {
    json doc = codebook_to_json(sets);
    doc["design"] = std::move(design);
    return doc;
}

std::string code_name(const CodeSet& set, std::size_t index) {
    return set.label() + "." + std::to_string(index + 1);
}

struct PairRef {
    std::size_t set_a, code_a, set_b, code_b;
};

/// Exports a pair's PCAF grid and returns its metrics entry.
json export_pair(const std::vector<CodeSet>& sets, const PairRef& ref, int p_max, int n_f, RegionSpec region,
                 const fs::path& dir, RunManifest& manifest) {
    const Code& a = sets[ref.set_a][ref.code_a];
    const Code& b = sets[ref.set_b][ref.code_b];
    const std::string name_a = code_name(sets[ref.set_a], ref.code_a);
    const std::string name_b = code_name(sets[ref.set_b], ref.code_b);
    const bool self = ref.set_a == ref.set_b && ref.code_a == ref.code_b;
    if (self && region.contains(0, 0)) region.exclusions.emplace_back(0, 0);

    const PcafGrid grid = pcaf_grid(a, b, p_max, n_f);
    const std::string stem = name_a + "_" + name_b;
    const fs::path complex_path = dir / ("pcaf_" + stem + ".csv");
    const fs::path db_path = dir / ("pcaf_" + stem + "_db.csv");
    write_pcaf_csv(grid, complex_path, db_path);
    manifest.add_output(complex_path);
    manifest.add_output(db_path);

    const fs::path cut_path = dir / ("cut_" + stem + ".csv");
    write_cut_csv(zero_delay_cut(grid), p_max, cut_path);
    manifest.add_output(cut_path);

    json entry = metrics_report(grid, region, {name_a, name_b});
    entry["self_pair"] = self;
    return entry;
}

/// Distinct unordered pairs: within each set, then across sets in set order.
std::vector<PairRef> all_pairs(const std::vector<CodeSet>& sets) {
    std::vector<PairRef> pairs;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        for (std::size_t i = 0; i < sets[s].count(); ++i) {
            for (std::size_t j = i + 1; j < sets[s].count(); ++j) pairs.push_back({s, i, s, j});
        }
    }
    for (std::size_t s = 0; s < sets.size(); ++s) {
        for (std::size_t t = s + 1; t < sets.size(); ++t) {
            for (std::size_t i = 0; i < sets[s].count(); ++i) {
                for (std::size_t j = 0; j < sets[t].count(); ++j) pairs.push_back({s, i, t, j});
            }
        }
    }
    return pairs;
}

std::pair<std::size_t, std::size_t> resolve_code(const std::vector<CodeSet>& sets, const std::string& token) {
    const auto dot = token.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == token.size()) {
        throw ConfigError("pair member '" + token + "' must look like <label>.<index>");
    }
    const std::string label = token.substr(0, dot);
    const std::string index_text = token.substr(dot + 1);
    if (!std::all_of(index_text.begin(), index_text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ConfigError("pair member '" + token + "' has a non-numeric index");
    }
    const auto index = std::stoul(index_text);
    for (std::size_t s = 0; s < sets.size(); ++s) {
        if (sets[s].label() != label) continue;
        if (index < 1 || index > sets[s].count()) {
            throw ConfigError("set '" + label + "' has " + std::to_string(sets[s].count()) + " codes, no code " +
                              index_text);
        }
        return {s, index - 1};
    }
    throw ConfigError("unknown code set label '" + label + "'");
}

std::vector<PairRef> parse_pairs(const std::vector<CodeSet>& sets, const std::string& text) {
    if (text == "all") return all_pairs(sets);
    std::vector<PairRef> pairs;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("pair '" + item + "' must look like A.1:B.2");
        const auto [sa, ca] = resolve_code(sets, item.substr(0, colon));
        const auto [sb, cb] = resolve_code(sets, item.substr(colon + 1));
        pairs.push_back({sa, ca, sb, cb});
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return pairs;
}

json siso_result_json(const SisoDesignResult& r) {
    return {{"x", phases_to_json(r.x)},
            {"y", phases_to_json(r.y)},
            {"objective_trace", r.objective_trace},
            {"outer_iters", r.outer_iters},
            {"converged", r.converged}};
}

json breakdown_json(const QuarticBreakdown& q) {
    return {{"x_self", q.x_self}, {"y_self", q.y_self}, {"cross", q.cross}, {"total", q.total()}};
}

}  // namespace

//----------------------------------------------------------------------------

void design_siso_command(const DesignSisoArgs& args, const Argv& argv) {
    if (args.mode != "doppler" && args.mode != "optimize" && args.mode != "single-sided") {
        throw ConfigError("unknown mode '" + args.mode + "' (expected doppler, optimize or single-sided)");
    }
    if (args.restarts < 1) throw ConfigError("--restarts must be >= 1");
    prepare_out(args.out);
    RunManifest manifest("design-siso", argv);
    const DesignConfig cfg = load_design_config(args.config, manifest);
    const int n = cfg.n_len;

    std::vector<SisoDesignResult> runs;
    if (args.mode == "doppler") {
        auto [x, y] = doppler_shift_pair(n);
        const double j = objective_siso(x, y, cfg);
        runs.push_back({std::move(x), std::move(y), {j}, 0, true});
    } else {
        const bool single = args.mode == "single-sided";
        runs = run_restarts(args.restarts, [&](int r) {
            const std::uint64_t seed = restart_seed(cfg.seed, r);
            const Code x0 = random_unimodular_code(n, derive_seed(seed, 0));
            const Code y0 = single ? Code::ones(static_cast<std::size_t>(n)) : random_unimodular_code(n, derive_seed(seed, 1));
            progress("design-siso: restart " + std::to_string(r) + " started (seed " + std::to_string(seed) + ")");
            SisoDesignResult res = design_siso(cfg, x0, y0, {single});
            char line[160];
            std::snprintf(line, sizeof line, "design-siso: restart %d done, %d iterations, J %.6g -> %.6g", r,
                          res.outer_iters, res.objective_trace.front(), res.objective_trace.back());
            progress(line);
            return res;
        });
        for (int r = 0; r < args.restarts; ++r) manifest.add_seed("restart_" + std::to_string(r), restart_seed(cfg.seed, r));
    }
    const std::size_t best = best_index(runs, [](const SisoDesignResult& r) { return r.objective_trace.back(); });
    const SisoDesignResult& res = runs[best];

    json restarts = json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        restarts.push_back({{"restart", r},
                            {"final_objective", runs[r].objective_trace.back()},
                            {"outer_iters", runs[r].outer_iters},
                            {"converged", runs[r].converged}});
    }
    json result = siso_result_json(res);
    result["mode"] = args.mode;
    result["selected_restart"] = best;
    result["restarts"] = restarts;
    emit_json(manifest, args.out / "result.json", result);

    const std::vector<CodeSet> sets{CodeSet("X", {res.x}), CodeSet("Y", {res.y})};
    json design = design_block(cfg, "siso");
    design["mode"] = args.mode;
    emit_json(manifest, args.out / "codebook.json", codebook_doc(sets, design));

    const PcafGrid grid = pcaf_grid(res.x, res.y, cfg.p_max, cfg.n_f);
    write_cut_csv(zero_delay_cut(grid), cfg.p_max, args.out / "cut.csv");
    manifest.add_output(args.out / "cut.csv");
    write_pcaf_csv(grid, args.out / "pcaf.csv", args.out / "pcaf_db.csv");
    manifest.add_output(args.out / "pcaf.csv");
    manifest.add_output(args.out / "pcaf_db.csv");

    const json metrics{{"objective", res.objective_trace.back()},
                       {"zero_delay", metrics_report(grid, RegionSpec::zero_delay(cfg.p_max), {"X.1", "Y.1"})},
                       {"all_lags", metrics_report(grid, RegionSpec::all_lags(cfg.p_max), {"X.1", "Y.1"})}};
    emit_json(manifest, args.out / "metrics.json", metrics);

    manifest.set_summary({{"selected_restart", best}, {"final_objective", res.objective_trace.back()},
                          {"zero_delay_psl_db", metrics["zero_delay"]["psl_db"]}});
    manifest.write(args.out / "manifest.json");
}

//----------------------------------------------------------------------------

void design_mimo_command(const DesignMimoArgs& args, const Argv& argv) {
    if (args.m < 1) throw ConfigError("--m must be >= 1");
    if (args.k < 0) throw ConfigError("--k must be >= 0");
    if (args.restarts < 1) throw ConfigError("--restarts must be >= 1");
    prepare_out(args.out);
    RunManifest manifest("design-mimo", argv);
    const DesignConfig cfg = load_design_config(args.config, manifest);
    const auto m_count = static_cast<std::size_t>(args.m);
    const auto k_count = static_cast<std::size_t>(args.k);

    if (cfg.aux_init == AuxInit::random) {
        const std::size_t need = aux_storage_size(cfg, m_count, k_count);
        if (need > cfg.sqrt_cache_bytes) {
            throw ConfigError("random auxiliary vectors need " + std::to_string(need >> 20) +
                              " MiB, over the sqrt_cache_bytes budget; use aux_init \"closed_form\" or raise the budget");
        }
    }

    std::vector<Code> warm_x, warm_y;
    if (args.warm_start) {
        const auto sets = deserialize_codebook(*args.warm_start);
        manifest.add_input(*args.warm_start);
        const auto find = [&](const std::string& label, std::size_t fallback) -> const CodeSet* {
            for (const auto& s : sets) {
                if (s.label() == label) return &s;
            }
            return fallback < sets.size() ? &sets[fallback] : nullptr;
        };
        const CodeSet* xs = find("X", 0);
        const CodeSet* ys = k_count > 0 ? find("Y", 1) : nullptr;
        if (xs == nullptr || xs->count() != m_count || (k_count > 0 && (ys == nullptr || ys->count() != k_count))) {
            throw ValidationError("warm start must provide " + std::to_string(m_count) + " X codes and " +
                                  std::to_string(k_count) + " Y codes");
        }
        if (static_cast<int>(xs->n_len()) != cfg.n_len) throw ValidationError("warm start code length differs from n_len");
        warm_x = xs->codes();
        if (ys != nullptr) warm_y = ys->codes();
    }

    const auto runs = run_restarts(args.restarts, [&](int r) {
        DesignConfig run_cfg = cfg;
        run_cfg.seed = restart_seed(cfg.seed, r);
        std::vector<Code> x0 = warm_x, y0 = warm_y;
        if (!args.warm_start) {
            for (std::size_t m = 0; m < m_count; ++m) x0.push_back(random_unimodular_code(cfg.n_len, derive_seed(run_cfg.seed, m)));
            for (std::size_t k = 0; k < k_count; ++k) {
                y0.push_back(random_unimodular_code(cfg.n_len, derive_seed(run_cfg.seed, m_count + k)));
            }
        }
        progress("design-mimo: restart " + std::to_string(r) + " started (seed " + std::to_string(run_cfg.seed) + ")");
        MimoDesignResult res = design_mimo(run_cfg, x0, y0);
        char line[200];
        std::snprintf(line, sizeof line, "design-mimo: restart %d done, %d iterations, surrogate %.6g -> %.6g, Q %.6g -> %.6g",
                      r, res.outer_iters, res.surrogate_trace.front(), res.surrogate_trace.back(),
                      res.quartic_trace.front(), res.quartic_trace.back());
        progress(line);
        return res;
    });
    for (int r = 0; r < args.restarts; ++r) manifest.add_seed("restart_" + std::to_string(r), restart_seed(cfg.seed, r));
    const std::size_t best = best_index(runs, [](const MimoDesignResult& r) { return r.surrogate_trace.back(); });
    const MimoDesignResult& res = runs[best];

    std::vector<CodeSet> sets{res.x};
    if (k_count > 0) sets.push_back(res.y);

    json restarts = json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        restarts.push_back({{"restart", r},
                            {"final_surrogate", runs[r].surrogate_trace.back()},
                            {"final_quartic", runs[r].quartic_trace.back()},
                            {"outer_iters", runs[r].outer_iters},
                            {"converged", runs[r].converged}});
    }
    json x_phases = json::array(), y_phases = json::array();
    for (const auto& c : res.x.codes()) x_phases.push_back(phases_to_json(c));
    for (const auto& c : res.y.codes()) y_phases.push_back(phases_to_json(c));
    const json result{{"x", x_phases},
                      {"y", y_phases},
                      {"surrogate_trace", res.surrogate_trace},
                      {"quartic_trace", res.quartic_trace},
                      {"breakdown", breakdown_json(res.breakdown)},
                      {"outer_iters", res.outer_iters},
                      {"converged", res.converged},
                      {"warm_start", args.warm_start.has_value()},
                      {"selected_restart", best},
                      {"restarts", restarts}};
    emit_json(manifest, args.out / "result.json", result);
    emit_json(manifest, args.out / "codebook.json", codebook_doc(sets, design_block(cfg, "mimo")));

    const fs::path grid_dir = args.out / "pairs";
    prepare_out(grid_dir);
    const RegionSpec region = RegionSpec::all_lags(cfg.p_max);
    json pairs = json::array();
    for (const PairRef& ref : all_pairs(sets)) {
        pairs.push_back(export_pair(sets, ref, cfg.p_max, cfg.n_f, region, grid_dir, manifest));
    }
    const json metrics{{"region", region.to_string()},
                       {"surrogate", res.surrogate_trace.back()},
                       {"breakdown", breakdown_json(res.breakdown)},
                       {"pairs", pairs}};
    emit_json(manifest, args.out / "metrics.json", metrics);

    manifest.set_summary({{"selected_restart", best},
                          {"final_surrogate", res.surrogate_trace.back()},
                          {"final_quartic", res.quartic_trace.back()},
                          {"pair_count", pairs.size()}});
    manifest.write(args.out / "manifest.json");
}

//----------------------------------------------------------------------------

namespace {

struct ScenarioFile {
    SimScenario scenario;
    std::string coding = "none";
    int pad_m = 0;
    int pad_n = 0;
    Window window = Window::none;
    int peaks = 10;
    std::optional<int> doppler_limit;
};

ScenarioFile parse_scenario(const json& doc) {
    static const std::set<std::string> known{"fmcw",   "emitters", "coding", "noise_power",  "seed",
                                             "pad_m",  "pad_n",    "window", "peaks", "doppler_limit"};
    if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) throw ConfigError("scenario: unknown field '" + key + "'");
    }
    const auto get_int = [&](const char* key, int fallback) {
        if (!doc.contains(key)) return fallback;
        if (!doc.at(key).is_number_integer()) throw ConfigError(std::string("scenario.") + key + ": expected an integer");
        return doc.at(key).get<int>();
    };

    ScenarioFile sf;
    SimScenario& sc = sf.scenario;
    if (doc.contains("fmcw")) sc.params = fmcw_params_from_json(doc.at("fmcw"));
    sc.params.validate();
    if (!doc.contains("emitters") || !doc.at("emitters").is_array()) throw ConfigError("scenario.emitters: expected an array");
    for (const auto& e : doc.at("emitters")) sc.emitters.push_back(emitter_from_json(e));
    if (doc.contains("noise_power")) {
        if (!doc.at("noise_power").is_number()) throw ConfigError("scenario.noise_power: expected a number");
        sc.noise_power = doc.at("noise_power").get<double>();
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) throw ConfigError("scenario.seed: expected a non-negative integer");
        sc.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("coding")) {
        if (!doc.at("coding").is_string()) throw ConfigError("scenario.coding: expected a string");
        sf.coding = doc.at("coding").get<std::string>();
    }
    if (doc.contains("window")) {
        if (!doc.at("window").is_string()) throw ConfigError("scenario.window: expected a string");
        sf.window = window_from_string(doc.at("window").get<std::string>());
    }
    sf.pad_m = get_int("pad_m", default_pad_m(sc.params));
    sf.pad_n = get_int("pad_n", default_pad_n(sc.params));
    sf.peaks = get_int("peaks", 10);
    if (doc.contains("doppler_limit")) sf.doppler_limit = get_int("doppler_limit", 0);
    return sf;
}

}  // namespace

void simulate_command(const SimulateArgs& args, const Argv& argv) {
    prepare_out(args.out);
    RunManifest manifest("simulate", argv);
    ScenarioFile sf = parse_scenario(read_json_file(args.scenario));
    manifest.add_input(args.scenario);
    SimScenario& sc = sf.scenario;

    if (sf.coding == "doppler") {
        auto [x, y] = doppler_shift_pair(sc.params.n_slow);
        sc.coding = {CodingKind::pair, std::move(x), std::move(y)};
    } else {
        sc.coding.kind = coding_kind_from_string(sf.coding);
        if (sc.coding.kind == CodingKind::pair) {
            if (!args.codebook) throw ConfigError("coding \"pair\" needs --codebook");
            const auto sets = deserialize_codebook(*args.codebook);
            manifest.add_input(*args.codebook);
            if (sets.size() < 2) throw ValidationError("pair coding needs a codebook with two sets (x and y)");
            sc.coding.x = sets[0][0];
            sc.coding.y = sets[1][0];
        }
    }
    sc.validate();
    if (sf.pad_m < sc.params.m_fast || sf.pad_n < sc.params.n_slow) {
        throw ConfigError("pad_m and pad_n must be at least m_fast and n_slow");
    }
    if (sf.peaks < 1) throw ConfigError("scenario.peaks must be >= 1");

    json config{{"fmcw", to_json(sc.params)}, {"coding", sf.coding},   {"noise_power", sc.noise_power},
                {"seed", sc.seed},            {"pad_m", sf.pad_m},     {"pad_n", sf.pad_n},
                {"window", to_string(sf.window)}, {"peaks", sf.peaks}};
    json emitters = json::array();
    for (const auto& e : sc.emitters) emitters.push_back(to_json(e));
    config["emitters"] = emitters;
    if (sf.doppler_limit) config["doppler_limit"] = *sf.doppler_limit;
    manifest.set_config(config);
    manifest.add_seed("noise", sc.seed);

    progress("simulate: synthesizing " + std::to_string(sc.params.m_fast) + " x " + std::to_string(sc.params.n_slow) +
             " samples");
    const RangeDopplerMap map = range_doppler_map(synthesize_samples(sc), sc.params, sf.pad_m, sf.pad_n, sf.window);

    write_rd_csv(map, args.out / "rd.csv");
    manifest.add_output(args.out / "rd.csv");
    write_rd_binary(map, args.out / "rd.bin");
    manifest.add_output(args.out / "rd.bin");
    emit_json(manifest, args.out / "rd.json", rd_sidecar(map));

    json predicted = json::array();
    for (const auto& e : sc.emitters) {
        const BinPosition b = predicted_bin(e, sc.params, sf.pad_m, sf.pad_n);
        predicted.push_back({{"kind", to_string(e.kind)}, {"k", b.k}, {"p", b.p}});
    }
    const auto peaks = find_peaks(map, sf.peaks);
    json table{{"peaks", peaks_to_json(peaks)}, {"predicted", predicted}};
    if (sf.doppler_limit) {
        table["doppler_limit"] = *sf.doppler_limit;
        table["low_doppler_peaks"] = peaks_to_json(find_peaks(map, sf.peaks, *sf.doppler_limit));
    }
    emit_json(manifest, args.out / "peaks.json", table);

    json top = json::object();
    if (!peaks.empty()) top = {{"k", peaks.front().k}, {"p", peaks.front().p}};
    manifest.set_summary({{"strongest_peak", top}});
    manifest.write(args.out / "manifest.json");
}

//----------------------------------------------------------------------------

void evaluate_command(const EvaluateArgs& args, const Argv& argv) {
    prepare_out(args.out);
    RunManifest manifest("evaluate", argv);
    const json doc = read_json_file(args.codebook);
    const std::vector<CodeSet> sets = codebook_from_json(doc);
    manifest.add_input(args.codebook);
    if (sets.empty()) throw ValidationError("codebook has no sets");
    const int n = static_cast<int>(sets.front().n_len());

    int n_f = 2 * n;
    std::optional<int> design_p;
    if (doc.contains("design") && doc.at("design").is_object()) {
        const json& d = doc.at("design");
        if (d.contains("n_f") && d.at("n_f").is_number_integer()) n_f = d.at("n_f").get<int>();
        if (d.contains("p_max") && d.at("p_max").is_number_integer()) design_p = d.at("p_max").get<int>();
    }
    RegionSpec region;
    if (args.region) {
        region = RegionSpec::parse(*args.region);
    } else if (design_p) {
        region = RegionSpec::all_lags(*design_p);
    } else {
        throw ConfigError("codebook has no design block; pass --region");
    }
    check_grid_params(n, region.p_max, n_f);
    const std::vector<PairRef> pairs = parse_pairs(sets, args.pairs);
    manifest.set_config({{"pairs", args.pairs}, {"region", region.to_string()}, {"n_f", n_f}, {"n_len", n}});

    const fs::path grid_dir = args.out / "pairs";
    prepare_out(grid_dir);
    json entries = json::array();
    for (const PairRef& ref : pairs) {
        entries.push_back(export_pair(sets, ref, region.p_max, n_f, region, grid_dir, manifest));
    }
    emit_json(manifest, args.out / "metrics.json",
              {{"n_len", n}, {"n_f", n_f}, {"region", region.to_string()}, {"pairs", entries}});
    manifest.set_summary({{"pair_count", entries.size()}});
    manifest.write(args.out / "manifest.json");
}

//----------------------------------------------------------------------------

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const LoadingError*>(&e) || dynamic_cast<const NumericalError*>(&e)) return 3;
    if (dynamic_cast<const InvalidDimension*>(&e) || dynamic_cast<const InvalidLag*>(&e) ||
        dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
        dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) {
        return 2;
    }
    return 1;
}

void write_diagnostic(const fs::path& out, const std::exception& e, int code) {
    if (out.empty()) return;
    std::string kind = "Error";
    if (dynamic_cast<const LoadingError*>(&e)) kind = "LoadingError";
    else if (dynamic_cast<const NumericalError*>(&e)) kind = "NumericalError";
    else if (dynamic_cast<const InvalidDimension*>(&e)) kind = "InvalidDimension";
    else if (dynamic_cast<const InvalidLag*>(&e)) kind = "InvalidLag";
    else if (dynamic_cast<const ValidationError*>(&e)) kind = "ValidationError";
    else if (dynamic_cast<const ParseError*>(&e)) kind = "ParseError";
    else if (dynamic_cast<const ConfigError*>(&e)) kind = "ConfigError";
    else if (dynamic_cast<const DomainError*>(&e)) kind = "DomainError";
    try {
        std::error_code ec;
        fs::create_directories(out, ec);
        write_json_file(out / "error.json", {{"error", kind}, {"message", e.what()}, {"exit_code", code}});
    } catch (const std::exception&) {
        // The diagnostic is best effort; stderr already has the message.
    }
}

}  // namespace slowcode::cli
