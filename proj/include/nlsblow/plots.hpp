#pragma once

#include <filesystem>
#include <vector>

namespace nlsblow {

/// Writes gnuplot scripts into run_dir for every recognised artifact there:
///   series.csv -> diagnostics.gp, series.csv + report.json -> blowup_rate.gp,
///   concentration.csv -> concentration.gp, rescaled.csv -> rescaled.gp,
///   decay.csv -> decay.gp, theory.csv -> p_of_s.gp.
/// Returns the script paths in that order. Throws ConfigError listing the
/// expected files if none is present.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& run_dir);

} // namespace nlsblow
