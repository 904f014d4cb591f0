#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowcode/core.hpp"

namespace slowcode {

/// Writes {"n_len": N, "sets": [{"label": ..., "phases": [[...], ...]}, ...]}.
/// Phases are written with round-trip precision.
void serialize_codebook(std::span<const CodeSet> sets, const std::filesystem::path& path);

/// Reads a codebook file. Besides "phases", a set may carry "entries" as
/// [[[re, im], ...], ...]; those are validated for unimodularity.
std::vector<CodeSet> deserialize_codebook(const std::filesystem::path& path);

nlohmann::json codebook_to_json(std::span<const CodeSet> sets);
std::vector<CodeSet> codebook_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const DesignConfig& cfg);
nlohmann::json to_json(const FmcwParams& params);
nlohmann::json to_json(const Emitter& emitter);

/// Missing keys keep their defaults; unknown keys are rejected.
DesignConfig design_config_from_json(const nlohmann::json& j);
FmcwParams fmcw_params_from_json(const nlohmann::json& j);
Emitter emitter_from_json(const nlohmann::json& j);

/// Parses a JSON file, turning syntax errors into ParseError with line and column.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

nlohmann::json phases_to_json(const Code& code);

}  // namespace slowcode
