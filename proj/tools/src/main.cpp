#include "chirpmem_cli/run.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    using namespace chirpmem::cli;

    CLI::App app{"chirpmem: chirped-pulse coherence rephasing simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    unsigned workers = 1;
    std::string preset;

    const char* scenarios[][2] = {
        {"pulse-scan", "eigenvalue trace and P_joint map for single pulses"},
        {"ensemble-scan", "final populations versus Delta after three pulses"},
        {"sequence-check", "rephasing condition and coherence phase scan"},
        {"phasematch", "echo wavevectors and silencing verdicts"},
        {"propagate", "Maxwell-Bloch propagation of the three controls"},
        {"rephasing-map", "R(Delta, z) from the propagated controls"},
        {"echo", "weak-signal echo efficiency versus depth"},
    };
    for (const auto& s : scenarios) {
        auto* sub = app.add_subcommand(s[0], s[1]);
        sub->add_option("--config", config_path, "TOML-style run config");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--workers", workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--preset", preset, "material or geometry preset");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    const std::string scenario = app.get_subcommands().front()->get_name();
    RunConfig config;
    try {
        if (!config_path.empty()) {
            config = RunConfig::from_file(config_path);
        }
        if (!preset.empty()) {
            apply_preset(config, preset);
        }
    } catch (const ConfigError& e) {
        std::cerr << "chirpmem " << scenario << ": " << e.what() << "\n";
        return exit_validation;
    }
    config.scenario = scenario;

    RunOptions options;
    options.out_dir = out_dir;
    options.workers = workers;
    return run(config, options, std::cout, std::cerr);
}
