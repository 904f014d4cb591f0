#include "slowcode/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace slowcode {

using nlohmann::json;

namespace {

std::string type_name(const json& j) { return j.type_name(); }

const json& require(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.is_object()) {
        throw ParseError(ctx + ": expected an object, found " + type_name(obj));
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(ctx + ": missing field '" + key + "'");
    }
    return *it;
}

double as_number(const json& j, const std::string& ctx) {
    if (!j.is_number()) {
        throw ParseError(ctx + ": expected a number, found " + type_name(j));
    }
    return j.get<double>();
}

std::vector<double> read_phase_row(const json& row, const std::string& ctx) {
    if (!row.is_array()) throw ParseError(ctx + ": expected an array of phases");
    std::vector<double> phases;
    phases.reserve(row.size());
    for (std::size_t n = 0; n < row.size(); ++n) {
        phases.push_back(as_number(row[n], ctx + "[" + std::to_string(n) + "]"));
    }
    return phases;
}

CVector read_entry_row(const json& row, const std::string& ctx) {
    if (!row.is_array()) throw ParseError(ctx + ": expected an array of [re, im] pairs");
    CVector z(static_cast<Eigen::Index>(row.size()));
    for (std::size_t n = 0; n < row.size(); ++n) {
        const std::string c = ctx + "[" + std::to_string(n) + "]";
        const json& pair = row[n];
        if (!pair.is_array() || pair.size() != 2) throw ParseError(c + ": expected [re, im]");
        z[static_cast<Eigen::Index>(n)] = {as_number(pair[0], c + "[0]"), as_number(pair[1], c + "[1]")};
    }
    return z;
}

Code make_code(const std::string& ctx, auto&& build) {
    try {
        return build();
    } catch (const ValidationError& e) {
        throw ValidationError(ctx + ": " + e.what());
    } catch (const InvalidDimension& e) {
        throw ValidationError(ctx + ": " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw ConfigError(what + ": unknown field '" + key + "'");
        }
    }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out, const std::string& what) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(what + "." + key + ": wrong type (" + it->type_name() + ")");
    }
}

}  // namespace

json phases_to_json(const Code& code) { return json(code.phases()); }

json codebook_to_json(std::span<const CodeSet> sets) {
    if (sets.empty()) throw ValidationError("codebook must contain at least one set");
    const std::size_t n_len = sets.front().n_len();
    json out_sets = json::array();
    for (const auto& set : sets) {
        if (set.n_len() != n_len) {
            throw ValidationError("codebook sets have different code lengths");
        }
        json rows = json::array();
        for (const auto& code : set.codes()) rows.push_back(phases_to_json(code));
        out_sets.push_back({{"label", set.label()}, {"phases", std::move(rows)}});
    }
    return {{"n_len", n_len}, {"sets", std::move(out_sets)}};
}

std::vector<CodeSet> codebook_from_json(const json& doc) {
    const json& n_node = require(doc, "n_len", "codebook");
    if (!n_node.is_number_integer()) throw ParseError("codebook.n_len: expected an integer");
    const auto n_len = n_node.get<long long>();
    const json& sets_node = require(doc, "sets", "codebook");
    if (!sets_node.is_array()) throw ParseError("codebook.sets: expected an array");

    std::vector<CodeSet> sets;
    for (std::size_t s = 0; s < sets_node.size(); ++s) {
        const std::string ctx = "codebook.sets[" + std::to_string(s) + "]";
        const json& set_node = sets_node[s];
        const json& label_node = require(set_node, "label", ctx);
        if (!label_node.is_string()) throw ParseError(ctx + ".label: expected a string");

        std::vector<Code> codes;
        if (set_node.contains("phases")) {
            const json& rows = set_node.at("phases");
            if (!rows.is_array()) throw ParseError(ctx + ".phases: expected an array");
            for (std::size_t m = 0; m < rows.size(); ++m) {
                const std::string c = ctx + ".phases[" + std::to_string(m) + "]";
                auto phases = read_phase_row(rows[m], c);
                codes.push_back(make_code(c, [&] { return Code::from_phases(std::move(phases)); }));
            }
        } else if (set_node.contains("entries")) {
            const json& rows = set_node.at("entries");
            if (!rows.is_array()) throw ParseError(ctx + ".entries: expected an array");
            for (std::size_t m = 0; m < rows.size(); ++m) {
                const std::string c = ctx + ".entries[" + std::to_string(m) + "]";
                const CVector z = read_entry_row(rows[m], c);
                codes.push_back(make_code(c, [&] { return Code::from_entries(z); }));
            }
        } else {
            throw ParseError(ctx + ": missing field 'phases'");
        }

        for (std::size_t m = 0; m < codes.size(); ++m) {
            if (static_cast<long long>(codes[m].size()) != n_len) {
                throw ValidationError(ctx + " code " + std::to_string(m) + " has length " +
                                      std::to_string(codes[m].size()) + ", expected n_len " +
                                      std::to_string(n_len));
            }
        }
        try {
            sets.emplace_back(label_node.get<std::string>(), std::move(codes));
        } catch (const InvalidDimension& e) {
            throw ValidationError(ctx + ": " + e.what());
        }
    }
    return sets;
}

void serialize_codebook(std::span<const CodeSet> sets, const std::filesystem::path& path) {
    write_json_file(path, codebook_to_json(sets));
}

std::vector<CodeSet> deserialize_codebook(const std::filesystem::path& path) {
    return codebook_from_json(read_json_file(path));
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
        const auto last_nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
        const std::size_t col = last_nl == std::string::npos ? pos + 1 : pos - last_nl;
        throw ParseError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

json to_json(const DesignConfig& cfg) {
    return {{"n_len", cfg.n_len},
            {"p_max", cfg.p_max},
            {"n_f", cfg.n_f},
            {"outer_tol", cfg.outer_tol},
            {"outer_cap", cfg.outer_cap},
            {"inner_tol", cfg.inner_tol},
            {"inner_cap", cfg.inner_cap},
            {"seed", cfg.seed},
            {"zeta_mode", to_string(cfg.zeta_mode)},
            {"gamma_mode", to_string(cfg.gamma_mode)},
            {"aux_init", to_string(cfg.aux_init)},
            {"sqrt_cache_bytes", cfg.sqrt_cache_bytes}};
}

json to_json(const FmcwParams& p) {
    return {{"f_c", p.f_c},     {"bandwidth", p.bandwidth}, {"t_c", p.t_c},
            {"f_s", p.f_s},     {"m_fast", p.m_fast},       {"n_slow", p.n_slow}};
}

json to_json(const Emitter& e) {
    return {{"range_m", e.range_m},
            {"speed_mps", e.speed_mps},
            {"snr_db", e.snr_db},
            {"kind", to_string(e.kind)},
            {"delay_lag", e.delay_lag}};
}

DesignConfig design_config_from_json(const json& j) {
    const std::string what = "design";
    reject_unknown(j,
                   {"n_len", "p_max", "n_f", "outer_tol", "outer_cap", "inner_tol", "inner_cap", "seed",
                    "zeta_mode", "gamma_mode", "aux_init", "sqrt_cache_bytes"},
                   what);
    DesignConfig cfg;
    read_opt(j, "n_len", cfg.n_len, what);
    read_opt(j, "p_max", cfg.p_max, what);
    read_opt(j, "n_f", cfg.n_f, what);
    read_opt(j, "outer_tol", cfg.outer_tol, what);
    read_opt(j, "outer_cap", cfg.outer_cap, what);
    read_opt(j, "inner_tol", cfg.inner_tol, what);
    read_opt(j, "inner_cap", cfg.inner_cap, what);
    read_opt(j, "seed", cfg.seed, what);
    read_opt(j, "sqrt_cache_bytes", cfg.sqrt_cache_bytes, what);
    std::string mode;
    if (j.contains("zeta_mode")) {
        read_opt(j, "zeta_mode", mode, what);
        cfg.zeta_mode = zeta_mode_from_string(mode);
    }
    if (j.contains("gamma_mode")) {
        read_opt(j, "gamma_mode", mode, what);
        cfg.gamma_mode = gamma_mode_from_string(mode);
    }
    if (j.contains("aux_init")) {
        read_opt(j, "aux_init", mode, what);
        cfg.aux_init = aux_init_from_string(mode);
    }
    cfg.validate();
    return cfg;
}

FmcwParams fmcw_params_from_json(const json& j) {
    const std::string what = "fmcw";
    reject_unknown(j, {"f_c", "bandwidth", "t_c", "f_s", "m_fast", "n_slow"}, what);
    FmcwParams p;
    read_opt(j, "f_c", p.f_c, what);
    read_opt(j, "bandwidth", p.bandwidth, what);
    read_opt(j, "t_c", p.t_c, what);
    read_opt(j, "f_s", p.f_s, what);
    read_opt(j, "m_fast", p.m_fast, what);
    read_opt(j, "n_slow", p.n_slow, what);
    p.validate();
    return p;
}

Emitter emitter_from_json(const json& j) {
    const std::string what = "emitter";
    reject_unknown(j, {"range_m", "speed_mps", "snr_db", "kind", "delay_lag"}, what);
    Emitter e;
    read_opt(j, "range_m", e.range_m, what);
    read_opt(j, "speed_mps", e.speed_mps, what);
    read_opt(j, "snr_db", e.snr_db, what);
    read_opt(j, "delay_lag", e.delay_lag, what);
    if (j.contains("kind")) {
        std::string kind;
        read_opt(j, "kind", kind, what);
        e.kind = emitter_kind_from_string(kind);
    }
    e.validate();
    return e;
}

}  // namespace slowcode
