#pragma once

#include <string>
#include <vector>

#include "dmkr/params.hpp"

namespace dmkr {

/// Command-line options shared by all subcommands.
struct CliOptions {
    std::string config_path;   // JSON config file; empty -> compiled defaults (K required)
    std::string config_text;   // inline config (tests); wins over config_path
    std::string out_dir = ".";
    int tmax = -1;             // -1 -> command default
    int top = 10;
    std::vector<int> times = {3, 10, 50};
    std::vector<int> subset;   // empty -> all computed eigenvalues
    std::string mode = "attractor";
    bool emit_plots = false;
};

/// Runs one subcommand (spectrum | otoc | reconstruct | weights | classical |
/// validate), writing CSV outputs and manifest.json into out_dir. Returns the
/// process exit status (nonzero on validate-suite failure).
int run_command(const std::string& command, const CliOptions& opts);

/// Full CLI entry point (argv parsing + dispatch); used by tools/dmkr.
int run_cli(int argc, const char* const* argv);

}  // namespace dmkr
