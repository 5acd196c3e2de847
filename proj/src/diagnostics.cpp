#include "nlsblow/diagnostics.hpp"

#include "nlsblow/fft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

namespace nlsblow {

namespace {

// Runs task(i) for i in [0, count) on up to `jobs` threads. Each index writes
// only its own output slot, so results do not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t count, int jobs, Task task) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

nlohmann::json finite_or_null(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

} // namespace

double modified_energy(const ComplexField2D& u, const MultiplierProfile& profile) {
  return energy(apply_symbol(u, [&profile](double k) { return Complex(profile(k)); }));
}

void to_json(nlohmann::json& j, const DecayFit& fit) {
  j = nlohmann::json{{"Ns", fit.cutoffs},
                     {"increments", fit.increments},
                     {"windows", fit.windows},
                     {"noise_floors", fit.noise_floors},
                     {"slope", finite_or_null(fit.slope)},
                     {"intercept", finite_or_null(fit.intercept)},
                     {"inconclusive", fit.inconclusive}};
}

DecayFit almost_conservation_experiment(const ComplexField2D& u0, double s,
                                        const std::vector<double>& cutoffs,
                                        const WindowPolicy& policy, int jobs) {
  if (cutoffs.size() < 4) throw ConfigError("almost conservation needs at least 4 cutoffs");
  for (double n : cutoffs) {
    if (!(n > 0.0 && n < 0.5 * u0.grid().nyquist())) {
      throw ConfigError(fmt::format("cutoff {} is not below half the Nyquist wavenumber {:.4g}", n,
                                    0.5 * u0.grid().nyquist()));
    }
  }

  DecayFit fit;
  fit.cutoffs = cutoffs;
  fit.increments.assign(cutoffs.size(), 0.0);
  fit.windows.assign(cutoffs.size(), 0.0);
  fit.noise_floors.assign(cutoffs.size(), 0.0);

  parallel_for(cutoffs.size(), jobs, [&](std::size_t i) {
    const MultiplierProfile profile(cutoffs[i], s);
    const double window = lwp_window(u0, s, profile, policy.c0);
    const double e0 = modified_energy(u0, profile);
    const double true_e0 = energy(u0);
    double increment = 0.0, noise = 0.0;
    const EvolveResult run = evolve(u0, policy.solver, window, profile,
                                    [&](const DiagnosticSample& sample, const ComplexField2D& u) {
                                      increment = std::max(increment, std::abs(modified_energy(u, profile) - e0));
                                      noise = std::max(noise, std::abs(sample.energy - true_e0));
                                    });
    if (run.report.stop_reason != StopReason::t_end_reached) {
      throw EstimationError(fmt::format("run for N = {} halted ({}) before its window {:.6g}", cutoffs[i],
                                        to_string(run.report.stop_reason), window));
    }
    fit.increments[i] = increment;
    fit.windows[i] = window;
    fit.noise_floors[i] = noise;
  });

  std::vector<double> x, y;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(fit.increments[i] >= 10.0 * fit.noise_floors[i]) || !(fit.increments[i] > 0.0)) {
      fit.inconclusive = true;
    }
    if (fit.increments[i] > 0.0) {
      x.push_back(std::log(cutoffs[i]));
      y.push_back(std::log(fit.increments[i]));
    }
  }
  if (x.size() < 2) {
    fit.slope = fit.intercept = std::numeric_limits<double>::quiet_NaN();
    fit.inconclusive = true;
    return fit;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double default_gamma(double z) { return std::log(std::numbers::e + 1.0 / z); }

void to_json(nlohmann::json& j, const ConcentrationReport& report) {
  nlohmann::json samples = nlohmann::json::array();
  for (const ConcentrationSample& s : report.samples) {
    samples.push_back({{"t", s.t},
                       {"radius", s.radius},
                       {"ball_mass", s.ball_mass},
                       {"reference_radius", s.reference_radius},
                       {"reference_mass", s.reference_mass},
                       {"cube_side", s.cube_side},
                       {"cube_sup", s.cube_sup},
                       {"resolved", s.resolved},
                       {"wrap_warning", s.wrap_warning}});
  }
  j = nlohmann::json{{"threshold", report.threshold},
                     {"verdict", finite_or_null(report.verdict)},
                     {"late_max", finite_or_null(report.late_max)},
                     {"late_min", finite_or_null(report.late_min)},
                     {"samples", samples}};
}

void write_concentration_csv(std::ostream& out, const ConcentrationReport& report) {
  out << "t,radius,ball_mass,cube_sup,resolved\n";
  for (const ConcentrationSample& s : report.samples) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{}\n", s.t, s.radius, s.ball_mass, s.cube_sup,
                       s.resolved ? 1 : 0);
  }
}

ConcentrationReport concentration_scan(const TrajectoryRecord& record, double t_star, double s,
                                       double townes_l2_norm, const GammaFunction& gamma) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("concentration_scan needs s in (0, 1]");
  if (!(townes_l2_norm > 0.0)) throw DomainError("concentration threshold must be positive");
  const GridSpec& grid = record.grid;

  ConcentrationReport report;
  report.threshold = townes_l2_norm;
  for (const Checkpoint& c : record.checkpoints) {
    if (!(c.t < t_star)) continue;
    const double z = t_star - c.t;
    ConcentrationSample sample;
    sample.t = c.t;
    sample.radius = std::pow(z, 0.5 * s) * gamma(z);
    sample.reference_radius = std::sqrt(z) * gamma(z);
    sample.cube_side = std::sqrt(z);
    const auto [row, col] = argmax_modulus(c.field);
    const double cx = grid.coordinate(col), cy = grid.coordinate(row);
    const BallMass ball = mass_in_ball(c.field, sample.radius, cx, cy);
    const BallMass reference = mass_in_ball(c.field, sample.reference_radius, cx, cy);
    sample.ball_mass = ball.value;
    sample.reference_mass = reference.value;
    sample.wrap_warning = ball.wrap_warning || reference.wrap_warning;
    sample.cube_sup = sup_mass_over_cubes(c.field, sample.cube_side);
    sample.resolved = sample.radius >= 2.0 * grid.spacing();
    report.samples.push_back(sample);
  }
  if (report.samples.empty()) throw DomainError("record has no checkpoint before t_star");

  std::vector<double> resolved;
  for (const ConcentrationSample& sample : report.samples) {
    if (sample.resolved) resolved.push_back(sample.ball_mass);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (resolved.empty()) {
    report.verdict = report.late_max = report.late_min = nan;
    return report;
  }
  report.verdict = *std::max_element(resolved.begin(), resolved.end()) / townes_l2_norm;
  const auto late = resolved.end() - std::min<std::ptrdiff_t>(5, std::ssize(resolved));
  report.late_max = *std::max_element(late, resolved.end());
  report.late_min = *std::min_element(late, resolved.end());
  return report;
}

double RescaledProfile::mass_in_rho(double rho) const {
  if (!(rho >= 0.0)) throw DomainError("ball radius must be nonnegative");
  if (rho == 0.0) return 0.0;
  const auto [row, col] = argmax_modulus(v);
  return mass_in_ball(v, rho, v.grid().coordinate(col), v.grid().coordinate(row)).value;
}

void to_json(nlohmann::json& j, const RescaledProfile& p) {
  j = nlohmann::json{{"time", p.time},         {"cutoff", p.cutoff}, {"sigma", p.sigma},
                     {"energy_v", p.energy_v}, {"l4_v", p.l4_v},     {"grad_v", p.grad_v},
                     {"mass_v", p.mass_v},     {"energy_Iu", p.energy_Iu}};
}

RescaledProfile rescale_profile(const ComplexField2D& u, const MultiplierProfile& profile, double time) {
  require_representable(profile, u.grid());
  const SpectrumField2D u_hat = transform(u);
  const double sigma = smoothed_d_norm(profile, u_hat);
  if (!(sigma > 1.0)) {
    throw DomainError(fmt::format("rescaling needs ||I<D>u|| > 1, got {:.6g}", sigma));
  }
  const ComplexField2D iu = inverse(apply_symbol(u_hat, [&profile](double k) { return Complex(profile(k)); }));
  const GridSpec stretched(u.grid().points(), sigma * u.grid().extent());
  std::vector<Complex> values(iu.values().begin(), iu.values().end());
  for (Complex& z : values) z /= sigma;

  RescaledProfile out{ComplexField2D(stretched, std::move(values))};
  out.sigma = sigma;
  out.time = time;
  out.cutoff = profile.cutoff();
  out.energy_Iu = energy(iu);
  out.energy_v = energy(out.v);
  out.l4_v = l4norm4(out.v);
  out.grad_v = std::sqrt(2.0 * kinetic(out.v));
  out.mass_v = mass(out.v);

  const double expected = out.energy_Iu / (sigma * sigma);
  const double scale = std::max({std::abs(expected), kinetic(out.v), 1e-300});
  if (std::abs(out.energy_v - expected) > 1e-10 * scale) {
    throw Error(fmt::format("rescaled energy {:.17g} departs from sigma^-2 E[Iu] = {:.17g}", out.energy_v,
                            expected));
  }
  return out;
}

double limit_profile_mass(const std::vector<RescaledProfile>& profiles, double rho) {
  if (profiles.size() < 3) throw DomainError("limit_profile_mass needs at least 3 profiles");
  double result = std::numeric_limits<double>::infinity();
  for (const RescaledProfile& p : profiles) result = std::min(result, p.mass_in_rho(rho));
  return result;
}

std::vector<const Checkpoint*> maximizing_checkpoints(const TrajectoryRecord& record) {
  std::vector<const Checkpoint*> out;
  for (const Checkpoint& c : record.checkpoints) {
    const DiagnosticSample& s = record.samples.at(c.sample);
    if (s.lambda >= s.Lambda) out.push_back(&c);
  }
  return out;
}

DoublingResult doubling_on_window(const ComplexField2D& u0, double s, double cutoff, double c0,
                                  const SolverConfig& solver) {
  const MultiplierProfile profile(cutoff, s);
  SolverConfig config = solver;
  config.strichartz_monitor = true;
  config.checkpoint_growth = 0.0;
  const double window = lwp_window(u0, s, profile, c0);
  const EvolveResult run = evolve(u0, config, window, profile);
  if (run.report.stop_reason != StopReason::t_end_reached) {
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  return doubling_check(run.record, window);
}

CalibrationResult calibrate_c0(const std::vector<ComplexField2D>& family, double s, double cutoff,
                               const SolverConfig& solver, int max_exponent, int jobs) {
  if (family.empty()) throw DomainError("calibration family is empty");
  for (int k = 0; k <= max_exponent; ++k) {
    const double c0 = std::ldexp(1.0, -k);
    std::vector<DoublingResult> results(family.size());
    parallel_for(family.size(), jobs,
                 [&](std::size_t i) { results[i] = doubling_on_window(family[i], s, cutoff, c0, solver); });
    if (std::all_of(results.begin(), results.end(), [](const DoublingResult& r) { return r.passed(); })) {
      CalibrationResult out{c0, k, {}, {}};
      for (const DoublingResult& r : results) {
        out.energy_factors.push_back(r.energy_factor);
        out.strichartz_factors.push_back(r.strichartz_factor);
      }
      return out;
    }
  }
  throw EstimationError(fmt::format("doubling fails for every c0 down to 2^-{}", max_exponent));
}

std::vector<ComplexField2D> doubling_test_family(const GridSpec& grid) {
  std::vector<ComplexField2D> family;
  for (int i = 0; i < 8; ++i) {
    const double amplitude = 0.5 + 0.25 * i;
    const double width = 0.6 + 0.15 * i;
    family.push_back(ComplexField2D::sample(grid, [=](double x, double y) {
      return Complex(amplitude * std::exp(-(x * x + y * y) / (width * width)));
    }));
  }
  for (int i = 0; i < 6; ++i) {
    const double kx = 1.0 + i, ky = 0.5 * i;
    const double amplitude = 1.0 + 0.2 * i;
    family.push_back(ComplexField2D::sample(grid, [=](double x, double y) {
      return amplitude * std::exp(-(x * x + y * y)) * std::polar(1.0, kx * x + ky * y);
    }));
  }
  for (int i = 0; i < 6; ++i) {
    const double d = 0.8 + 0.3 * i;
    const double amplitude = 1.2 + 0.1 * i;
    family.push_back(ComplexField2D::sample(grid, [=](double x, double y) {
      const double a = (x - d) * (x - d) + y * y;
      const double b = (x + d) * (x + d) + y * y;
      return Complex(amplitude * (std::exp(-a) + std::exp(-b)));
    }));
  }
  return family;
}

} // namespace nlsblow
