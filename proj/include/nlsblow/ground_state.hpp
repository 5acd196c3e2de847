#pragma once

#include "nlsblow/field.hpp"

#include <json.hpp>

#include <filesystem>
#include <vector>

namespace nlsblow {

/// Townes profile Q, the positive decaying solution of  Lap w - w + w^3 = 0.
struct GroundState {
  std::vector<double> radii;    // r_0 = 0 < r_1 < ... = r_max
  std::vector<double> profile;  // w(r_i)
  double mass = 0.0;            // ||Q||_{L^2}^2
  double grad2 = 0.0;           // ||grad Q||_{L^2}^2
  double l4norm4 = 0.0;         // ||Q||_{L^4}^4
  double center_value = 0.0;    // w(0)
  double residual = 0.0;        // L^2 norm of the equation residual

  double energy() const { return 0.5 * grad2 - 0.25 * l4norm4; }
};

void to_json(nlohmann::json& j, const GroundState& state);

/// Writes the two-column "r,w" CSV.
void write_profile_csv(const std::filesystem::path& path, const GroundState& state);

struct PetviashviliResult {
  GroundState state;
  ComplexField2D field;  // Q sampled on the solver grid, centered in the box
  int iterations = 0;
};

/// Spectral renormalization  w <- M^{3/2} (1 - Lap)^{-1} w^3  with
/// M = <w, (1 - Lap) w> / <w, w^3>, iterated until the residual L^2 norm drops
/// below tol. Throws ConvergenceError (message carries the residual history)
/// after max_iterations.
PetviashviliResult solve_petviashvili(const GridSpec& grid, double tol, int max_iterations = 10000);

/// Radial ODE  w'' + w'/r - w + w^3 = 0,  w'(0) = 0, integrated with RK4 and
/// bisected on w(0) in [1, 4] between shots that cross zero and shots that
/// turn back up, until the bracket is below 1e-12. Beyond the point where the
/// two bracketing shots separate the profile is continued with the K_0 tail.
/// Requires dr < 1e-3 and r_max >= 15.
GroundState shooting_oracle(double dr, double r_max);

/// ||grad f||^2 ||f||^2 / ||f||_{L^4}^4. Throws DomainError for f = 0.
double j_functional(const ComplexField2D& f);

/// Optimal Gagliardo-Nirenberg constant 2 / ||Q||_{L^2}^2.
double c_opt(const GroundState& state);

} // namespace nlsblow
