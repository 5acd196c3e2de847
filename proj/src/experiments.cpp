#include "nlsblow/experiments.hpp"

#include "nlsblow/audit.hpp"
#include "nlsblow/checkpoint.hpp"
#include "nlsblow/diagnostics.hpp"
#include "nlsblow/error.hpp"
#include "nlsblow/ground_state.hpp"
#include "nlsblow/initial.hpp"
#include "nlsblow/theory.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

#ifndef NLSBLOW_VERSION
#define NLSBLOW_VERSION "unknown"
#endif

namespace nlsblow {

namespace fs = std::filesystem;

std::string code_version() { return NLSBLOW_VERSION; }

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& j) { open_output(path) << j.dump(2) << '\n'; }

nlohmann::json finite_or_null(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

InitialData seeded(InitialData initial, std::uint64_t seed) {
  if (auto* random = std::get_if<RandomData>(&initial)) random->seed = seed;
  return initial;
}

EvolveResult run_evolution(const RunConfig& config, const fs::path& dir) {
  const ComplexField2D u0 = make_initial(config.grid, seeded(config.initial, config.seed));
  const MultiplierProfile profile(config.cutoffs.front(), config.s, config.transition);
  EvolveResult result = evolve(u0, config.solver, config.t_end, profile);
  auto series = open_output(dir / "series.csv");
  write_series_csv(series, result.record);
  nlohmann::json report = result.report;
  write_json(dir / "report.json", report);
  const Checkpoint& last = result.record.checkpoints.back();
  save_field(dir / "final.nls", last.field, last.t);
  return result;
}

RunOutcome ground_state_run(const RunConfig& config, const fs::path& dir) {
  const PetviashviliResult pet = solve_petviashvili(config.grid, config.ground_state.tolerance);
  const GroundState shot = shooting_oracle(config.ground_state.dr, config.ground_state.r_max);
  write_profile_csv(dir / "profile.csv", shot);
  write_profile_csv(dir / "petviashvili_profile.csv", pet.state);
  const double agreement = std::abs(pet.state.mass - shot.mass) / shot.mass;
  nlohmann::json summary{{"petviashvili", pet.state},
                         {"iterations", pet.iterations},
                         {"shooting", shot},
                         {"mass_relative_difference", agreement},
                         {"c_opt", c_opt(shot)}};
  write_json(dir / "ground_state.json", summary);
  return {exit_success, summary};
}

RunOutcome evolve_run(const RunConfig& config, const fs::path& dir) {
  const EvolveResult result = run_evolution(config, dir);
  nlohmann::json summary = result.report;
  return {result.report.valid ? exit_success : exit_numerical_failure, summary};
}

RunOutcome concentrate_run(const RunConfig& config, const fs::path& dir) {
  const EvolveResult result = run_evolution(config, dir);
  const BlowupReport& report = result.report;
  nlohmann::json summary{{"report", report}};
  if (!indicates_blowup(report.stop_reason) || !std::isfinite(report.t_star)) {
    summary["reason"] = "no blowup detected, nothing to scan";
    return {exit_inconclusive, summary};
  }

  double threshold = config.concentration.threshold;
  if (threshold == 0.0) {
    threshold = std::sqrt(shooting_oracle(config.ground_state.dr, config.ground_state.r_max).mass);
  }
  const ConcentrationReport scan = concentration_scan(result.record, report.t_star, config.s, threshold);
  auto csv = open_output(dir / "concentration.csv");
  write_concentration_csv(csv, scan);
  nlohmann::json scan_json = scan;
  write_json(dir / "concentration.json", scan_json);

  std::vector<RescaledProfile> profiles;
  for (const Checkpoint* c : maximizing_checkpoints(result.record)) {
    if (result.record.samples[c->sample].sigma > 1.0) {
      profiles.push_back(rescale_profile(c->field, result.record.profile, c->t));
    }
  }
  auto rescaled = open_output(dir / "rescaled.csv");
  rescaled << "t,sigma,energy_v,grad_v,mass_v,mass_rho\n";
  for (const RescaledProfile& p : profiles) {
    rescaled << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.time, p.sigma, p.energy_v,
                            p.grad_v, p.mass_v, p.mass_in_rho(config.concentration.rho));
  }

  nlohmann::json limit{{"rho", config.concentration.rho}, {"profiles", profiles.size()}};
  const auto k = static_cast<std::size_t>(config.concentration.profiles);
  if (profiles.size() >= k) {
    const std::vector<RescaledProfile> tail(profiles.end() - static_cast<std::ptrdiff_t>(k), profiles.end());
    const double value = limit_profile_mass(tail, config.concentration.rho);
    limit["value"] = value;
    limit["ratio"] = value / threshold;
  }
  write_json(dir / "limit_profile.json", limit);

  summary["verdict"] = finite_or_null(scan.verdict);
  summary["threshold"] = threshold;
  summary["limit_profile"] = limit;
  if (!report.valid) return {exit_numerical_failure, summary};
  if (!std::isfinite(scan.verdict) || !limit.contains("value")) return {exit_inconclusive, summary};
  return {exit_success, summary};
}

RunOutcome almost_conservation_run(const RunConfig& config, const fs::path& dir, int jobs) {
  const ComplexField2D u0 = make_initial(config.grid, seeded(config.initial, config.seed));
  const DecayFit fit = almost_conservation_experiment(u0, config.s, config.cutoffs,
                                                      WindowPolicy{config.c0, config.solver}, jobs);
  nlohmann::json summary = fit;
  write_json(dir / "decay.json", summary);
  auto csv = open_output(dir / "decay.csv");
  csv << "N,increment,window,noise_floor\n";
  for (std::size_t i = 0; i < fit.cutoffs.size(); ++i) {
    csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", fit.cutoffs[i], fit.increments[i], fit.windows[i],
                       fit.noise_floors[i]);
  }
  return {fit.inconclusive ? exit_inconclusive : exit_success, summary};
}

RunOutcome audit_run(const RunConfig& config, const fs::path& dir, int jobs) {
  AuditOptions options;
  options.samples = config.audit.samples;
  options.seed = config.seed;
  options.constant = config.audit.constant;
  options.jobs = jobs;
  nlohmann::json summary = nlohmann::json::array();
  bool passed = true;
  for (double n : config.cutoffs) {
    const MultiplierProfile profile(n, config.s, config.transition);
    const AuditReport reports[] = {audit_case1_vanishing(profile, options), audit_case2_bound(profile, options),
                                   audit_trivial_bound(profile, options), audit_sextilinear_bound(profile, options),
                                   audit_half_weight(profile, config.audit.radii)};
    nlohmann::json entry{{"N", n}, {"reports", nlohmann::json::array()}};
    for (const AuditReport& r : reports) {
      entry["reports"].push_back(r);
      passed = passed && r.passed();
    }
    summary.push_back(entry);
  }
  write_json(dir / "audit.json", summary);
  return {passed ? exit_success : exit_numerical_failure, summary};
}

RunOutcome theory_run(const RunConfig& config, const fs::path& dir) {
  const auto params = theory::ExponentParams::with_epsilon(config.theory.epsilon);
  const auto rows = theory::table(config.theory.s_min, config.theory.s_max, config.theory.count, params);
  nlohmann::json summary{{"s_q", theory::s_q(params)},
                         {"alpha4", params.alpha4},
                         {"alpha6", params.alpha6},
                         {"rows", theory::to_json(rows)}};
  write_json(dir / "theory.json", summary);
  auto csv = open_output(dir / "theory.csv");
  csv << "s,p,n_exponent\n";
  for (const theory::TableRow& r : rows) csv << fmt::format("{:.17g},{:.17g},{:.17g}\n", r.s, r.p, r.n_exponent);
  return {exit_success, summary};
}

} // namespace

RunOutcome run_experiment(const RunConfig& config, const fs::path& out_dir, int jobs) {
  config.validate();
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  fs::create_directories(out_dir);
  switch (config.experiment) {
    case Experiment::ground_state: return ground_state_run(config, out_dir);
    case Experiment::evolve: return evolve_run(config, out_dir);
    case Experiment::concentrate: return concentrate_run(config, out_dir);
    case Experiment::almost_conservation: return almost_conservation_run(config, out_dir, jobs);
    case Experiment::multiplier_audit: return audit_run(config, out_dir, jobs);
    case Experiment::theory: return theory_run(config, out_dir);
  }
  throw ConfigError("unknown experiment");
}

void write_manifest(const fs::path& out_dir, const RunConfig& config, int jobs, double wall_seconds,
                    const RunOutcome& outcome) {
  nlohmann::json manifest{{"experiment", to_string(config.experiment)},
                          {"config", serialize_config(config)},
                          {"code_version", code_version()},
                          {"seed", config.seed},
                          {"jobs", jobs},
                          {"wall_time_seconds", wall_seconds},
                          {"exit_code", outcome.exit_code},
                          {"summary", outcome.summary}};
  write_json(out_dir / "manifest.json", manifest);
}

RunConfig config_from_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw ConfigError(fmt::format("cannot open manifest '{}'", manifest.string()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("manifest '{}': {}", manifest.string(), e.what()));
  }
  if (!j.contains("config") || !j["config"].is_string()) {
    throw ConfigError(fmt::format("manifest '{}' has no config echo", manifest.string()));
  }
  return parse_config(j["config"].get<std::string>());
}

} // namespace nlsblow
