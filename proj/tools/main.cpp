#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace slowcode::cli;

int main(int argc, char** argv) {
    const Argv args(argv, argv + argc);

    CLI::App app{"Slow-time code design and FMCW interference simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "slowcode 0.1.0");

    DesignSisoArgs siso;
    auto* siso_cmd = app.add_subcommand("design-siso", "Design one transmit/receive code pair");
    siso_cmd->add_option("--config", siso.config, "Design config JSON")->required()->check(CLI::ExistingFile);
    siso_cmd->add_option("--mode", siso.mode, "doppler, optimize or single-sided")
        ->check(CLI::IsMember({"doppler", "optimize", "single-sided"}));
    siso_cmd->add_option("--restarts", siso.restarts, "Random restarts, best kept")->check(CLI::PositiveNumber);
    siso_cmd->add_option("--out", siso.out, "Output directory")->required();

    DesignMimoArgs mimo;
    std::string warm_start;
    auto* mimo_cmd = app.add_subcommand("design-mimo", "Design code sets X (M codes) and Y (K codes)");
    mimo_cmd->add_option("--config", mimo.config, "Design config JSON")->required()->check(CLI::ExistingFile);
    mimo_cmd->add_option("--m", mimo.m, "Codes in X")->check(CLI::PositiveNumber);
    mimo_cmd->add_option("--k", mimo.k, "Codes in Y")->check(CLI::NonNegativeNumber);
    mimo_cmd->add_option("--restarts", mimo.restarts, "Random restarts, best kept")->check(CLI::PositiveNumber);
    mimo_cmd->add_option("--warm-start", warm_start, "Codebook to start from")->check(CLI::ExistingFile);
    mimo_cmd->add_option("--out", mimo.out, "Output directory")->required();

    SimulateArgs sim;
    std::string sim_codebook;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a coded FMCW frame and its range-Doppler map");
    sim_cmd->add_option("--scenario", sim.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sim_cmd->add_option("--codebook", sim_codebook, "Codebook for pair coding")->check(CLI::ExistingFile);
    sim_cmd->add_option("--out", sim.out, "Output directory")->required();

    EvaluateArgs eval;
    std::string region;
    auto* eval_cmd = app.add_subcommand("evaluate", "PCAF grids and metrics of codebook pairs");
    eval_cmd->add_option("--codebook", eval.codebook, "Codebook JSON")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--pairs", eval.pairs, "\"all\" or X.1:Y.1,X.1:X.2");
    eval_cmd->add_option("--region", region, "e.g. lags=all;pmax=16;exclude=0:0");
    eval_cmd->add_option("--out", eval.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::filesystem::path out;
    try {
        if (*siso_cmd) {
            out = siso.out;
            design_siso_command(siso, args);
        } else if (*mimo_cmd) {
            out = mimo.out;
            if (!warm_start.empty()) mimo.warm_start = warm_start;
            design_mimo_command(mimo, args);
        } else if (*sim_cmd) {
            out = sim.out;
            if (!sim_codebook.empty()) sim.codebook = sim_codebook;
            simulate_command(sim, args);
        } else if (*eval_cmd) {
            out = eval.out;
            if (!region.empty()) eval.region = region;
            evaluate_command(eval, args);
        }
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        std::fprintf(stderr, "error: %s\n", e.what());
        write_diagnostic(out, e, code);
        return code;
    }
    return 0;
}
