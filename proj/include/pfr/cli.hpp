#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pfr/config.hpp"

namespace pfr {

inline constexpr const char* kToolName = "photonfridge";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitNotConverged = 2,
  kExitDegenerate = 3,
  kExitSweepPointFailed = 4,
  kExitAbsorbing = 5,
  kExitValidateFailed = 6,
  kExitCrossoverNoRoot = 7,
};

/// Subcommands: steady, sweep, condense, mc, teff, crossover, validate, replay.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);

/// Runs one subcommand on a fully resolved configuration, writing outputs
/// and a manifest into out_dir. Returns the exit code.
int run_subcommand(const std::string& subcommand, const RunConfig& cfg,
                   const std::filesystem::path& out_dir, int threads, std::ostream& log);

}  // namespace pfr
