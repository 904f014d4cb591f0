#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace slowcode::cli {

/// Command-line arguments, kept for the run manifest.
using Argv = std::vector<std::string>;

struct DesignSisoArgs {
    std::filesystem::path config;
    std::string mode = "optimize";  ///< doppler | optimize | single-sided
    int restarts = 1;
    std::filesystem::path out;
};

struct DesignMimoArgs {
    std::filesystem::path config;
    int m = 1;
    int k = 1;
    int restarts = 1;
    std::optional<std::filesystem::path> warm_start;
    std::filesystem::path out;
};

struct SimulateArgs {
    std::filesystem::path scenario;
    std::optional<std::filesystem::path> codebook;
    std::filesystem::path out;
};

struct EvaluateArgs {
    std::filesystem::path codebook;
    std::string pairs = "all";  ///< "all" or "A.1:B.2,..." with 1-based indices
    std::optional<std::string> region;
    std::filesystem::path out;
};

// Each command writes its artifacts and a manifest.json into out, and throws
// slowcode errors on failure.
void design_siso_command(const DesignSisoArgs& args, const Argv& argv);
void design_mimo_command(const DesignMimoArgs& args, const Argv& argv);
void simulate_command(const SimulateArgs& args, const Argv& argv);
void evaluate_command(const EvaluateArgs& args, const Argv& argv);

/// 0 ok, 2 usage/config/validation, 3 numerical failure, 1 anything else.
int exit_code_for(const std::exception& e);

/// Writes {"error", "message", "exit_code"} to out/error.json when possible.
void write_diagnostic(const std::filesystem::path& out, const std::exception& e, int code);

}  // namespace slowcode::cli
