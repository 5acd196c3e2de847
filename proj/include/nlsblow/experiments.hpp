#pragma once

#include "nlsblow/config.hpp"

#include <json.hpp>

#include <filesystem>

namespace nlsblow {

enum ExitCode : int { exit_success = 0, exit_config_error = 2, exit_numerical_failure = 3, exit_inconclusive = 4 };

struct RunOutcome {
  int exit_code = exit_success;
  nlohmann::json summary;
};

/// Runs the configured experiment and writes its artifacts into out_dir.
/// Library errors propagate; verdict-level outcomes are reported through
/// the exit code.
RunOutcome run_experiment(const RunConfig& config, const std::filesystem::path& out_dir, int jobs = 1);

/// manifest.json: config echo, code version, seed, jobs, wall time, exit code and summary.
void write_manifest(const std::filesystem::path& out_dir, const RunConfig& config, int jobs,
                    double wall_seconds, const RunOutcome& outcome);

/// Reads the config echo back out of a manifest.
RunConfig config_from_manifest(const std::filesystem::path& manifest);

std::string code_version();

} // namespace nlsblow
