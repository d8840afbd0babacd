#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bounds/cli/config.hpp"
#include "bounds/dynamics/system_model.hpp"
#include "bounds/trajectory/setpoints.hpp"
#include "bounds/trajectory/trajectory.hpp"

namespace bounds::cli {

inline const std::vector<std::string> kCommands = {"simulate", "observability", "train",
                                                   "filter",   "aikf",          "compare"};

/// Exit codes: success, input error, runtime (numerical) error.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitRuntime = 2 };

dynamics::SystemModel build_model(const Config& cfg);

/// Motif list `kind:amplitude:duration:start[, ...]`.
std::vector<trajectory::MotifSpec> parse_motifs(const std::string& text);

/// Simulated (motifs or random setpoints tracked by the MPC) or ingested
/// trajectory with duration / dt + 1 samples.
trajectory::Trajectory build_trajectory(const Config& cfg, const dynamics::SystemModel& model);

/// Runs one command with a resolved configuration, writing outputs and
/// resolved_config.ini into `run.out`. Progress goes to `log`. Returns the
/// files written. Errors propagate as exceptions.
std::vector<std::filesystem::path> run_command(const std::string& command, const Config& cfg,
                                               std::ostream& log);

/// Command-line entry point. Failures print one JSON line to `err`
/// (`{"error": kind, "exit_code": n, "message": ..., "key": ...}`).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bounds::cli
