#pragma once

#include "nlsblow/functionals.hpp"
#include "nlsblow/multiplier.hpp"
#include "nlsblow/solver.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <vector>

namespace nlsblow {

/// E[I_N u]. Any cutoff is accepted; past the grid corner I_N is the identity.
double modified_energy(const ComplexField2D& u, const MultiplierProfile& profile);

struct WindowPolicy {
  double c0 = 1.0;
  SolverConfig solver;
};

struct DecayFit {
  std::vector<double> cutoffs;
  std::vector<double> increments;    // sup_t |E[I_N u(t)] - E[I_N u(0)]| on the window
  std::vector<double> windows;       // c0 ||I_N grad u0||^{-2/s}
  std::vector<double> noise_floors;  // sup_t |E[u(t)] - E[u(0)]| on the same run
  double slope = 0.0;
  double intercept = 0.0;
  bool inconclusive = false;  // some increment below 10x its noise floor
};

void to_json(nlohmann::json& j, const DecayFit& fit);

/// Evolves u0 over the modified LWP window of each cutoff and fits
/// log(increment) against log(N). Needs at least 4 cutoffs, each below
/// Nyquist / 2. Cutoffs run concurrently on up to `jobs` threads.
DecayFit almost_conservation_experiment(const ComplexField2D& u0, double s,
                                        const std::vector<double>& cutoffs,
                                        const WindowPolicy& policy, int jobs = 1);

/// Slowly divergent window factor; default log(e + 1/z).
using GammaFunction = std::function<double(double)>;
double default_gamma(double z);

struct ConcentrationSample {
  double t = 0.0;
  double radius = 0.0;            // z^{s/2} gamma(z), z = t_star - t
  double ball_mass = 0.0;         // L^2 norm in that disk
  double reference_radius = 0.0;  // z^{1/2} gamma(z)
  double reference_mass = 0.0;
  double cube_side = 0.0;         // z^{1/2}
  double cube_sup = 0.0;
  bool resolved = false;          // radius >= 2h
  bool wrap_warning = false;
};

struct ConcentrationReport {
  std::vector<ConcentrationSample> samples;
  double threshold = 0.0;  // ||Q||_{L^2}
  double verdict = 0.0;    // max resolved ball mass / threshold; NaN if none resolved
  double late_max = 0.0;   // over the last five resolved samples
  double late_min = 0.0;
};

void to_json(nlohmann::json& j, const ConcentrationReport& report);
/// CSV with header t,radius,ball_mass,cube_sup,resolved.
void write_concentration_csv(std::ostream& out, const ConcentrationReport& report);

/// Disk masses around the |u| maximum at every checkpoint before t_star.
/// Throws DomainError if the record has no checkpoint before t_star.
ConcentrationReport concentration_scan(const TrajectoryRecord& record, double t_star, double s,
                                       double townes_l2_norm,
                                       const GammaFunction& gamma = default_gamma);

struct RescaledProfile {
  ComplexField2D v;         // I_N u / sigma on a grid of extent sigma * L
  double sigma = 0.0;       // ||I_N <D> u||_{L^2}
  double energy_v = 0.0;
  double l4_v = 0.0;        // ||v||_{L^4}^4
  double grad_v = 0.0;      // ||grad v||_{L^2}
  double mass_v = 0.0;      // ||v||_{L^2}^2
  double energy_Iu = 0.0;   // E[I_N u]
  double time = 0.0;
  double cutoff = 0.0;
  /// L^2 norm of v in the disk of radius rho around its |v| maximum.
  double mass_in_rho(double rho) const;
};

void to_json(nlohmann::json& j, const RescaledProfile& profile);

/// v(y) = sigma^{-1} I_N u(y / sigma). Throws DomainError if sigma <= 1.
RescaledProfile rescale_profile(const ComplexField2D& u, const MultiplierProfile& profile,
                                double time = 0.0);

/// Minimum of mass_in_rho(rho) over the profiles. Needs at least 3.
double limit_profile_mass(const std::vector<RescaledProfile>& profiles, double rho);

/// Checkpoints whose lambda is a running maximum of the record, in time order.
std::vector<const Checkpoint*> maximizing_checkpoints(const TrajectoryRecord& record);

struct CalibrationResult {
  double c0 = 0.0;
  int exponent = 0;  // c0 = 2^{-exponent}
  std::vector<double> energy_factors;       // worst member at the chosen c0
  std::vector<double> strichartz_factors;
};

/// Largest c0 in {1, 1/2, ..., 2^{-max_exponent}} for which doubling_check
/// passes on every member. Throws EstimationError if none does.
CalibrationResult calibrate_c0(const std::vector<ComplexField2D>& family, double s, double cutoff,
                               const SolverConfig& solver, int max_exponent = 12, int jobs = 1);

/// Runs one member over its window and returns the doubling factors.
DoublingResult doubling_on_window(const ComplexField2D& u0, double s, double cutoff, double c0,
                                  const SolverConfig& solver);

/// Twenty smooth data on the grid: Gaussians, Gaussian-modulated plane waves
/// and two-bump superpositions of moderate mass.
std::vector<ComplexField2D> doubling_test_family(const GridSpec& grid);

} // namespace nlsblow
