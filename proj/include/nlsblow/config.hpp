#pragma once

#include "nlsblow/grid.hpp"
#include "nlsblow/initial.hpp"
#include "nlsblow/multiplier.hpp"
#include "nlsblow/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nlsblow {

enum class Experiment { ground_state, evolve, concentrate, almost_conservation, multiplier_audit, theory };

std::string to_string(Experiment experiment);
/// Accepts both "almost_conservation" and "almost-conservation". Throws ConfigError.
Experiment parse_experiment(std::string_view name);

struct GroundStateOptions {
  double tolerance = 1e-10;  // Petviashvili residual
  double dr = 5e-4;          // shooting step
  double r_max = 20.0;
};

struct ConcentrationOptions {
  double rho = 10.0;      // ball radius for the limit-profile mass
  int profiles = 5;       // final maximizing checkpoints used for trends
  double threshold = 0.0; // ||Q||_{L^2}; 0 computes it with the shooting oracle
};

struct AuditSettings {
  std::size_t samples = 100000;
  double constant = 10.0;
  std::size_t radii = 10000;
};

struct TheorySettings {
  double s_min = 0.87;
  double s_max = 0.99;
  int count = 13;
  double epsilon = 0.0;
};

struct RunConfig {
  Experiment experiment = Experiment::theory;
  double s = 0.9;
  std::vector<double> cutoffs{32.0};
  std::uint64_t seed = 1;
  std::string output_dir;
  GridSpec grid{256, 20.0};
  InitialData initial = GaussianData{};
  SolverConfig solver;
  double t_end = 1.0;
  Transition transition = Transition::log_hermite;
  double c0 = 1.0;  // modified LWP window constant, calibrated
  GroundStateOptions ground_state;
  ConcentrationOptions concentration;
  AuditSettings audit;
  TheorySettings theory;

  /// Range checks; throws ConfigError naming the key.
  void validate() const;
};

/// INI-style text: top-level keys, then [grid], [initial], [solver], [window],
/// [ground_state], [concentration], [audit], [theory] sections. Missing keys
/// take defaults; unknown keys, malformed values and out-of-range values throw
/// ConfigError (with the line number for syntax errors).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text that parses back to an equal configuration.
std::string serialize_config(const RunConfig& config);

} // namespace nlsblow
