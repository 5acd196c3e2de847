#include "nlsblow/solver.hpp"

#include "nlsblow/fft.hpp"
#include "nlsblow/functionals.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace nlsblow {

void SolverConfig::validate() const {
  auto fail = [](const char* key, const char* rule) {
    throw ConfigError(fmt::format("solver.{} {}", key, rule));
  };
  if (!(dt_initial > 0.0)) fail("dt_initial", "must be positive");
  if (!(dt_floor > 0.0)) fail("dt_floor", "must be positive");
  if (!(dt_floor <= dt_initial)) fail("dt_floor", "must not exceed dt_initial");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) fail("cfl_safety", "must lie in (0, 1)");
  if (!(gradient_ceiling > 0.0)) fail("gradient_ceiling", "must be positive");
  if (!(tail_threshold > 0.0 && tail_threshold <= 1.0)) fail("tail_threshold", "must lie in (0, 1]");
  if (record_stride < 1) fail("record_stride", "must be >= 1");
  if (!(checkpoint_growth == 0.0 || checkpoint_growth > 1.0)) {
    fail("checkpoint_growth", "must be 0 (disabled) or > 1");
  }
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::gradient_ceiling: return "gradient_ceiling";
    case StopReason::dt_floor: return "dt_floor";
    case StopReason::tail_unresolved: return "tail_unresolved";
    case StopReason::t_end_reached: return "t_end_reached";
  }
  return "unknown";
}

bool indicates_blowup(StopReason reason) { return reason != StopReason::t_end_reached; }

void write_series_csv(std::ostream& out, const TrajectoryRecord& record) {
  out << "t,mass,energy,kinetic,lambda,Lambda,sigma,Sigma,tail,boundary,variance\n";
  for (const DiagnosticSample& s : record.samples) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                       s.t, s.mass, s.energy, s.kinetic, s.lambda, s.Lambda, s.sigma, s.Sigma,
                       s.tail, s.boundary, s.variance);
  }
}

namespace {

nlohmann::json finite_or_null(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

} // namespace

void to_json(nlohmann::json& j, const BlowupReport& r) {
  j = nlohmann::json{{"t_star", finite_or_null(r.t_star)},
                     {"fit_exponent_kinetic", finite_or_null(r.fit_exponent_kinetic)},
                     {"fit_exponent_sigma", finite_or_null(r.fit_exponent_sigma)},
                     {"stop_reason", to_string(r.stop_reason)},
                     {"steps", r.steps},
                     {"last_time", r.last_time},
                     {"mass_drift", r.mass_drift},
                     {"energy_drift", r.energy_drift},
                     {"valid", r.valid},
                     {"note", r.note}};
}

namespace {

void nonlinear_phase(std::span<Complex> u, double dt) {
  for (Complex& z : u) {
    const double phase = std::norm(z) * dt;
    z *= Complex(std::cos(phase), std::sin(phase));
  }
}

void free_propagator(const GridSpec& grid, std::span<Complex> u_hat, double dt) {
  const auto& xi = wavenumber_magnitudes(grid);
  for (std::size_t i = 0; i < u_hat.size(); ++i) {
    const double phase = -xi[i] * xi[i] * dt;
    u_hat[i] *= Complex(std::cos(phase), std::sin(phase));
  }
}

DiagnosticSample measure(const ComplexField2D& u, double t, const MultiplierProfile& profile,
                         bool strichartz) {
  const SpectrumField2D u_hat = transform(u);
  DiagnosticSample s;
  s.t = t;
  s.mass = mass(u_hat);
  s.kinetic = kinetic(u_hat);
  s.energy = s.kinetic - 0.25 * l4norm4(u);
  s.lambda = hs_norm(u_hat, profile.regularity());
  s.sigma = smoothed_d_norm(profile, u_hat);
  s.tail = tail_fraction(u_hat);
  s.boundary = boundary_amplitude(u);
  s.variance = variance(u);
  if (strichartz) {
    s.strichartz_l6 = l6norm(inverse(apply_symbol(u_hat, [&profile](double k) {
      return Complex(profile(k) * std::sqrt(1.0 + k * k));
    })));
  }
  return s;
}

} // namespace

ComplexField2D step_strang(const ComplexField2D& u, double dt, bool nonlinear) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  ComplexField2D out = u;
  auto values = out.values();
  if (nonlinear) nonlinear_phase(values, 0.5 * dt);
  forward_inplace(out.grid(), values);
  free_propagator(out.grid(), values, dt);
  inverse_inplace(out.grid(), values);
  if (nonlinear) nonlinear_phase(values, 0.5 * dt);
  if (!out.all_finite()) {
    throw InstabilityError("non-finite values after a Strang step", TimedField{0.0, u});
  }
  return out;
}

EvolveResult evolve(const ComplexField2D& u0, const SolverConfig& config, double t_end,
                    const MultiplierProfile& profile, const SampleObserver& observer) {
  config.validate();
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!u0.all_finite()) throw DomainError("initial data contains non-finite values");
  require_representable(profile, u0.grid());

  const GridSpec grid = u0.grid();
  EvolveResult result{TrajectoryRecord{grid, profile, config.nonlinear, {}, {}}, BlowupReport{}};
  TrajectoryRecord& record = result.record;
  BlowupReport& report = result.report;

  auto push_sample = [&](const ComplexField2D& u, double t) {
    DiagnosticSample s = measure(u, t, profile, config.strichartz_monitor);
    const DiagnosticSample* prev = record.samples.empty() ? nullptr : &record.samples.back();
    s.Lambda = prev ? std::max(prev->Lambda, s.lambda) : s.lambda;
    s.Sigma = prev ? std::max(prev->Sigma, s.sigma) : s.sigma;
    record.samples.push_back(s);
    if (observer) observer(s, u);
  };
  auto maybe_checkpoint = [&](const ComplexField2D& u, bool force) {
    const DiagnosticSample& s = record.samples.back();
    const std::size_t index = record.samples.size() - 1;
    if (!record.checkpoints.empty() && record.checkpoints.back().sample == index) return;
    bool take = force;
    if (!take && config.checkpoint_growth > 0.0 && s.lambda >= s.Lambda) {
      const double last_kinetic = record.samples[record.checkpoints.back().sample].kinetic;
      take = s.kinetic >= config.checkpoint_growth * last_kinetic;
    }
    if (take) record.checkpoints.push_back({s.t, index, u});
  };

  ComplexField2D u = u0;
  double t = 0.0;
  push_sample(u, t);
  maybe_checkpoint(u, true);
  if (!(config.gradient_ceiling > record.front().kinetic)) {
    throw ConfigError("solver.gradient_ceiling must exceed the initial kinetic energy");
  }

  ComplexField2D trial(grid);
  const auto& xi = wavenumber_magnitudes(grid);
  const double tail_edge = 2.0 / 3.0 * grid.nyquist();
  const double area = grid.spacing() * grid.spacing();
  StopReason reason = StopReason::t_end_reached;
  std::size_t steps = 0;

  while (t < t_end) {
    double dt = config.dt_initial;
    if (config.nonlinear) {
      const double peak = linf(u);
      if (peak > 0.0) dt = std::min(dt, config.cfl_safety / (peak * peak));
    }
    if (dt < config.dt_floor) {
      reason = StopReason::dt_floor;
      break;
    }
    const bool last_step = t + dt >= t_end;
    if (last_step) dt = t_end - t;

    trial = u;
    auto values = trial.values();
    if (config.nonlinear) nonlinear_phase(values, 0.5 * dt);
    forward_inplace(grid, values);
    free_propagator(grid, values, dt);

    double total = 0.0, tail = 0.0, grad = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double a = std::norm(values[i]);
      total += a;
      grad += xi[i] * xi[i] * a;
      if (xi[i] > tail_edge) tail += a;
    }
    if (total > 0.0 && tail / total > config.tail_threshold) {
      reason = StopReason::tail_unresolved;
      break;
    }
    if (0.5 * grad * area > config.gradient_ceiling) {
      reason = StopReason::gradient_ceiling;
      break;
    }

    inverse_inplace(grid, values);
    if (config.nonlinear) nonlinear_phase(values, 0.5 * dt);
    if (!trial.all_finite()) {
      throw InstabilityError(fmt::format("non-finite values at t = {:.9g}", t + dt), TimedField{t, u});
    }
    std::swap(u, trial);
    t = last_step ? t_end : t + dt;
    ++steps;
    if (steps % static_cast<std::size_t>(config.record_stride) == 0 || last_step) {
      push_sample(u, t);
      maybe_checkpoint(u, false);
    }
  }
  if (record.samples.back().t != t) push_sample(u, t);
  maybe_checkpoint(u, true);

  report.stop_reason = reason;
  report.steps = steps;
  report.last_time = t;
  const DiagnosticSample& first = record.front();
  const double energy_scale = std::max(std::abs(first.energy), first.kinetic);
  for (const DiagnosticSample& s : record.samples) {
    report.mass_drift = std::max(report.mass_drift, std::abs(s.mass - first.mass) / first.mass);
    if (energy_scale > 0.0) {
      report.energy_drift =
          std::max(report.energy_drift, std::abs(s.energy - first.energy) / energy_scale);
    }
  }
  report.valid = report.energy_drift <= 1e-4;

  if (indicates_blowup(reason)) {
    try {
      report.t_star = estimate_t_star(record);
      const ExponentFit fit = fit_blowup_exponents(record, report.t_star);
      report.fit_exponent_kinetic = fit.kinetic;
      report.fit_exponent_sigma = fit.sigma;
    } catch (const EstimationError& e) {
      report.note = e.what();
    }
  }
  return result;
}

namespace {

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw EstimationError("degenerate abscissae in least-squares fit");
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

} // namespace

double estimate_t_star(const TrajectoryRecord& record, std::size_t window) {
  if (window < 2) throw EstimationError("t_star window needs at least two samples");
  const auto& samples = record.samples;
  if (samples.size() < window) {
    throw EstimationError(fmt::format("t_star needs {} samples, record has {}", window, samples.size()));
  }
  std::vector<double> t, inv;
  for (std::size_t i = samples.size() - window; i < samples.size(); ++i) {
    if (!t.empty() && !(samples[i].kinetic > samples[i - 1].kinetic)) {
      throw EstimationError("kinetic energy is not increasing over the final window");
    }
    t.push_back(samples[i].t);
    inv.push_back(1.0 / samples[i].kinetic);
  }
  const Line line = least_squares(t, inv);
  if (!(line.slope < 0.0)) throw EstimationError("1/kinetic does not decrease over the final window");
  return -line.intercept / line.slope;
}

ExponentFit fit_blowup_exponents(const TrajectoryRecord& record, double t_star, std::size_t window) {
  std::vector<double> log_gap, log_grad, log_sigma;
  for (auto it = record.samples.rbegin(); it != record.samples.rend() && log_gap.size() < window; ++it) {
    if (!(it->t < t_star)) continue;
    log_gap.push_back(std::log(t_star - it->t));
    log_grad.push_back(0.5 * std::log(2.0 * it->kinetic));
    log_sigma.push_back(std::log(it->sigma));
  }
  if (log_gap.size() < 3) throw EstimationError("too few samples before t_star for an exponent fit");
  return {-least_squares(log_gap, log_grad).slope, -least_squares(log_gap, log_sigma).slope};
}

double lwp_window(const ComplexField2D& u0, double s, const MultiplierProfile& profile, double c0) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("lwp_window needs s in (0, 1)");
  if (!(c0 > 0.0)) throw DomainError("lwp_window needs c0 > 0");
  const double grad = smoothed_grad_norm(profile, transform(u0));
  if (!(grad > 0.0)) throw DomainError("lwp_window is unbounded for data with zero gradient");
  return c0 * std::pow(grad, -2.0 / s);
}

DoublingResult doubling_check(const TrajectoryRecord& record, double window) {
  const auto& samples = record.samples;
  if (!(window > 0.0)) throw DomainError("doubling window must be positive");
  if (window > samples.back().t) {
    throw DomainError(fmt::format("window {:.6g} exceeds record span {:.6g}", window, samples.back().t));
  }
  const double base = samples.front().sigma;
  DoublingResult result;
  double cubes = 0.0;
  for (std::size_t i = 0; i < samples.size() && samples[i].t <= window; ++i) {
    result.energy_factor = std::max(result.energy_factor, samples[i].sigma / base);
    if (i + 1 < samples.size()) {
      if (std::isnan(samples[i].strichartz_l6)) {
        throw ConfigError("record has no L^6 monitor; enable solver.strichartz_monitor");
      }
      const double dt = std::min(samples[i + 1].t, window) - samples[i].t;
      if (dt > 0.0) cubes += dt * std::pow(samples[i].strichartz_l6, 3);
    }
  }
  result.strichartz_factor = std::cbrt(cubes) / base;
  return result;
}

VarianceCheck variance_check(const TrajectoryRecord& record, double t_max) {
  std::vector<const DiagnosticSample*> used;
  for (const DiagnosticSample& s : record.samples) {
    if (s.t <= t_max) used.push_back(&s);
  }
  if (used.size() < 5) throw EstimationError("variance check needs at least 5 samples");

  const DiagnosticSample& first = record.front();
  VarianceCheck check;
  check.target = 16.0 * (record.nonlinear ? first.energy : first.kinetic);
  for (std::size_t i = 1; i + 1 < used.size(); ++i) {
    const double t0 = used[i - 1]->t, t1 = used[i]->t, t2 = used[i + 1]->t;
    const double v0 = used[i - 1]->variance, v1 = used[i]->variance, v2 = used[i + 1]->variance;
    const double second = 2.0 * ((v2 - v1) / (t2 - t1) - (v1 - v0) / (t1 - t0)) / (t2 - t0);
    check.max_abs_deviation = std::max(check.max_abs_deviation, std::abs(second - check.target));
  }
  const double scale = std::abs(check.target) > 1e-3 * 16.0 * first.kinetic
                           ? std::abs(check.target)
                           : 16.0 * first.kinetic;
  check.relative = scale > 0.0 ? check.max_abs_deviation / scale : 0.0;
  return check;
}

} // namespace nlsblow
