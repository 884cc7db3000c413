#pragma once

#include "chirpmem_cli/config.hpp"

#include <iosfwd>
#include <string>

namespace chirpmem::cli {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_solver = 2 };

struct RunOptions {
    std::string out_dir = ".";
    unsigned workers = 1;
};

/// Applies a named preset: a material (fills material.preset, atom.omega_r,
/// atom.dipole_ratio and the suggested pulse) or a phase-matching geometry.
/// Throws ConfigError for unknown names.
void apply_preset(RunConfig& config, const std::string& name);

/// Validates `config`, runs its scenario and writes the data CSVs,
/// summary.json and manifest.toml into options.out_dir.  Messages go to
/// `out`/`err`; the return value is an ExitCode.
int run(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace chirpmem::cli
