#include "nlsblow/config.hpp"
#include "nlsblow/error.hpp"
#include "nlsblow/experiments.hpp"
#include "nlsblow/plots.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace nlsblow;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void report_error(const char* type, const std::string& message, const std::optional<fs::path>& dir) {
  const nlohmann::json error{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << error.dump() << '\n';
  if (dir) {
    std::error_code ec;
    fs::create_directories(*dir, ec);
    std::ofstream out(*dir / "error.json");
    if (out) out << error.dump(2) << '\n';
  }
}

RunConfig resolve_config(Experiment experiment, const Options& options) {
  RunConfig config;
  if (options.config.empty()) {
    if (experiment != Experiment::theory && experiment != Experiment::multiplier_audit &&
        experiment != Experiment::ground_state) {
      throw ConfigError("--config is required for this subcommand");
    }
    config.experiment = experiment;
  } else if (fs::path(options.config).extension() == ".json") {
    config = config_from_manifest(options.config);
  } else {
    config = load_config(options.config);
  }
  if (config.experiment != experiment) {
    throw ConfigError("experiment: config names '" + to_string(config.experiment) + "' but the subcommand runs '" +
                      to_string(experiment) + "'");
  }
  if (options.seed) config.seed = *options.seed;
  config.validate();
  return config;
}

int run(Experiment experiment, const Options& options) {
  std::optional<fs::path> dir;
  if (!options.out.empty()) dir = options.out;
  try {
    const RunConfig config = resolve_config(experiment, options);
    if (!dir) dir = config.output_dir.empty() ? fs::path("runs") / to_string(experiment) : fs::path(config.output_dir);
    const auto start = std::chrono::steady_clock::now();
    const RunOutcome outcome = run_experiment(config, *dir, options.jobs);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(*dir, config, options.jobs, seconds, outcome);
    std::cout << outcome.summary.dump(2) << '\n';
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    report_error("config", e.what(), dir);
    return exit_config_error;
  } catch (const std::exception& e) {
    report_error("numerical", e.what(), dir);
    return exit_numerical_failure;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step simulator and I-method diagnostics for the 2D cubic focusing NLS"};
  app.require_subcommand(1);
  Options options;

  const std::pair<const char*, Experiment> commands[] = {
      {"ground-state", Experiment::ground_state},
      {"evolve", Experiment::evolve},
      {"concentrate", Experiment::concentrate},
      {"almost-conservation", Experiment::almost_conservation},
      {"multiplier-audit", Experiment::multiplier_audit},
      {"theory", Experiment::theory},
  };
  std::optional<Experiment> chosen;
  for (const auto& [name, experiment] : commands) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + to_string(experiment) + " experiment");
    sub->add_option("--config", options.config, "Config file, or a manifest.json to replay");
    sub->add_option("--out", options.out, "Output directory (overrides output_dir)");
    sub->add_option("--seed", options.seed, "Seed override");
    sub->add_option("--jobs", options.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->callback([&chosen, experiment = experiment] { chosen = experiment; });
  }
  CLI::App* plots = app.add_subcommand("plots", "Write gnuplot scripts for a run directory");
  std::string run_dir;
  plots->add_option("--out", run_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config_error;
  }

  if (plots->parsed()) {
    try {
      for (const fs::path& script : emit_plots(run_dir)) std::cout << script.string() << '\n';
      return exit_success;
    } catch (const ConfigError& e) {
      report_error("config", e.what(), std::nullopt);
      return exit_config_error;
    } catch (const std::exception& e) {
      report_error("numerical", e.what(), std::nullopt);
      return exit_numerical_failure;
    }
  }
  return run(*chosen, options);
}
