#ifndef SHADOWLAB_RUNNER_HPP
#define SHADOWLAB_RUNNER_HPP

// Batch execution of the CLI subcommands over a parsed configuration, with
// deterministic CSV/JSON artifact emission and a run manifest.

#include <string>

#include "shadowlab/config.hpp"

namespace shadowlab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitComputationalFailure = 3,
    kExitInvariantViolation = 4,
};

/// Executes one subcommand (shadow-check, return-map, recurrence, census,
/// l1, area-check) and writes its artifacts plus manifest.json (last) under
/// cfg.out_dir. Returns a process exit code; individual task failures are
/// collected in the manifest.
int run(const std::string& subcommand, const ConfigFile& raw, const ScenarioConfig& cfg);

}  // namespace shadowlab

#endif
