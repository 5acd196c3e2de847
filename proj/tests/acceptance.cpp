// Desk-scale acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include "nlsblow/audit.hpp"
#include "nlsblow/config.hpp"
#include "nlsblow/diagnostics.hpp"
#include "nlsblow/experiments.hpp"
#include "nlsblow/fft.hpp"
#include "nlsblow/functionals.hpp"
#include "nlsblow/ground_state.hpp"
#include "nlsblow/initial.hpp"
#include "nlsblow/theory.hpp"
#include "support.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nlsblow;
using namespace nlsblow::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(NLSBLOW_SOURCE_DIR) / "configs";

int failures = 0;

void report(int k, bool pass, const std::string& detail, double seconds) {
  if (!pass) ++failures;
  fmt::print("Criterion {}: {} ({}; {:.1f} s)\n", k, pass ? "PASS" : "FAIL", detail, seconds);
  std::fflush(stdout);
}

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

EvolveResult run_config(const RunConfig& c) {
  const ComplexField2D u0 = make_initial(c.grid, c.initial);
  return evolve(u0, c.solver, c.t_end, MultiplierProfile(c.cutoffs.front(), c.s, c.transition));
}

// Byte comparison of every CSV in two run directories.
bool same_csv(const fs::path& a, const fs::path& b, int& compared) {
  bool same = true;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    const fs::path other = b / entry.path().filename();
    same = same && fs::exists(other) && slurp(entry.path()) == slurp(other);
  }
  return same;
}

} // namespace

int main() {
  // 1. Ground state.
  Stopwatch w1;
  const GroundState oracle = shooting_oracle(1e-4, 20.0);
  const PetviashviliResult pet = solve_petviashvili(GridSpec(256, 48.0), 1e-10);
  const double q_norm = std::sqrt(oracle.mass);
  {
    const GroundState& q = pet.state;
    double pohozaev = 0.0;
    for (const GroundState* g : {&oracle, &q}) {
      pohozaev = std::max({pohozaev, rel(g->grad2, g->mass), rel(g->l4norm4, 2 * g->mass),
                           std::abs(g->energy()) / g->mass});
    }
    const double mass_gap = rel(q.mass, oracle.mass);
    report(1, mass_gap < 1e-4 && q.residual < 1e-8 && pohozaev < 1e-5,
           fmt::format("mass {:.9f} vs oracle {:.9f}, rel {:.2e}; residual {:.2e}; Pohozaev {:.2e}", q.mass,
                       oracle.mass, mass_gap, q.residual, pohozaev),
           w1.seconds());
  }

  // 2. Gagliardo-Nirenberg.
  {
    Stopwatch w;
    const double c = c_opt(oracle);
    std::mt19937_64 engine(2);
    const GridSpec g(256, 16.0);
    double worst = 0.0;  // largest ||f||_4^4 / (C ||f||^2 ||grad f||^2)
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
      const ComplexField2D f = random_smooth_field(g, engine);
      const double ratio = l4norm4(f) / (c * mass(f) * 2 * kinetic(f));
      worst = std::max(worst, ratio);
      if (ratio > 1 + 1e-6) ++violations;
    }
    const double at_q = 1.0 / (c * j_functional(pet.field));
    report(2, violations == 0 && std::abs(at_q - 1) < 1e-4,
           fmt::format("100 fields, max ratio {:.4f}, violations {}; ratio at Q {:.8f}", worst, violations, at_q),
           w.seconds());
  }

  // 3. Theory constants.
  {
    Stopwatch w;
    const double sq = theory::s_q();
    int bad = 0;
    for (int i = 1; i <= 1000; ++i) {
      const double s = sq + (1 - sq) * i / 1001.0;
      if (!(theory::p_of_s(s) < 2.0)) ++bad;
    }
    report(3, std::abs(sq - 0.863325) < 1e-6 && bad == 0 && theory::p_of_s(1.0) == 0.0,
           fmt::format("s_Q {:.9f}; p >= 2 at {} of 1000 samples; p(1) = {}", sq, bad, theory::p_of_s(1.0)),
           w.seconds());
  }

  // 4. Multiplier audits.
  {
    Stopwatch w;
    const RunConfig c = load_config(kConfigs / "audit.ini");
    const MultiplierProfile m(c.cutoffs.front(), c.s);
    AuditOptions options;
    options.samples = c.audit.samples;
    options.seed = c.seed;
    options.constant = c.audit.constant;
    std::vector<AuditReport> audits{audit_case1_vanishing(m, options), audit_case2_bound(m, options),
                                    audit_trivial_bound(m, options), audit_sextilinear_bound(m, options),
                                    audit_half_weight(m, c.audit.radii)};
    std::size_t violations = 0;
    std::string detail;
    for (const AuditReport& a : audits) {
      violations += a.violations;
      detail += fmt::format("{} {} max {:.3g}; ", a.regime, a.violations, a.max_ratio);
    }
    std::mt19937_64 engine(2024);
    const GridSpec g(256, 16.0);
    int sandwich_bad = 0;
    for (int i = 0; i < 100; ++i) {
      const ComplexField2D u = random_smooth_field(g, engine);
      const SpectrumField2D u_hat = transform(u);
      for (double n : {8.0, 16.0, 32.0}) {
        const MultiplierProfile mn(n, c.s);
        const double lower = hs_norm(u_hat, c.s);
        const double middle = smoothed_d_norm(mn, u_hat);
        if (std::sqrt(mass(apply_I(mn, u))) > std::sqrt(mass(u)) * (1 + 1e-13)) ++sandwich_bad;
        if (lower > middle * (1 + 1e-12) || middle > std::pow(n, 1 - c.s) * lower) ++sandwich_bad;
      }
    }
    report(4, violations == 0 && sandwich_bad == 0,
           detail + fmt::format("sandwich failures {}", sandwich_bad), w.seconds());
  }

  // Shared A=3 blowup run for criteria 5, 6 and 9.
  Stopwatch w_blow;
  const RunConfig blow_config = load_config(kConfigs / "blowup_a3.ini");
  const EvolveResult blow = run_config(blow_config);
  const double blow_seconds = w_blow.seconds();

  // 5. Solver validation.
  {
    Stopwatch w;
    const EvolveResult a1 = run_config(load_config(kConfigs / "gaussian_a1.ini"));
    SolverConfig qc;
    qc.record_stride = 20;
    const EvolveResult q = evolve(pet.field, qc, 1.0, MultiplierProfile(8, 0.9));
    double q_drift = 0.0;
    for (const DiagnosticSample& s : q.record.samples) {
      q_drift = std::max(q_drift, rel(s.kinetic, q.record.front().kinetic));
    }
    const double t_pre = 0.7 * blow.report.t_star;
    double virial = INFINITY;
    try {
      virial = variance_check(blow.record, t_pre).relative;
    } catch (const Error&) {
    }
    const bool a1_ok = a1.report.stop_reason == StopReason::t_end_reached && a1.record.back().t == 2.0 &&
                       a1.report.mass_drift < 1e-10 && a1.report.energy_drift < 1e-6;
    const bool q_ok = q.report.stop_reason == StopReason::t_end_reached && q_drift < 1e-2;
    report(5, a1_ok && q_ok && virial < 5e-2,
           fmt::format("A=1 mass drift {:.2e}, energy drift {:.2e}; Q kinetic drift {:.2e}; "
                       "virial rel {:.2e} on t <= {:.3f}",
                       a1.report.mass_drift, a1.report.energy_drift, q_drift, virial, t_pre),
           w.seconds());
  }

  // 6. Blowup and concentration.
  ConcentrationReport concentration;
  {
    Stopwatch w;
    const auto& samples = blow.record.samples;
    bool monotone = true;
    for (std::size_t i = samples.size() / 2 + 1; i < samples.size(); ++i) {
      monotone = monotone && samples[i].kinetic > samples[i - 1].kinetic;
    }
    const bool stopped = indicates_blowup(blow.report.stop_reason) && blow.report.last_time < blow_config.t_end;
    const double sigma_floor = blow_config.s / 2 - 0.1;
    bool scanned = false;
    if (std::isfinite(blow.report.t_star)) {
      concentration = concentration_scan(blow.record, blow.report.t_star, blow_config.s, q_norm);
      scanned = true;
    }
    const bool pass = stopped && monotone && blow.report.valid && scanned &&
                      blow.report.fit_exponent_kinetic >= 0.4 && blow.report.fit_exponent_kinetic <= 0.7 &&
                      blow.report.fit_exponent_sigma >= sigma_floor && concentration.verdict >= 0.9;
    report(6, pass,
           fmt::format("{} at t = {:.4f}, t* = {:.5f}, energy drift {:.2e}; monotone late growth {}; "
                       "kinetic exponent {:.4f}; sigma exponent {:.4f} (floor {:.2f}); verdict {:.4f}",
                       to_string(blow.report.stop_reason), blow.report.last_time, blow.report.t_star,
                       blow.report.energy_drift, monotone, blow.report.fit_exponent_kinetic,
                       blow.report.fit_exponent_sigma, sigma_floor, concentration.verdict),
           blow_seconds + w.seconds());
  }

  // 7. Almost conservation.
  {
    Stopwatch w;
    const RunConfig c = load_config(kConfigs / "almost_conservation.ini");
    const ComplexField2D u0 = make_initial(c.grid, c.initial);
    const DecayFit fit = almost_conservation_experiment(u0, c.s, c.cutoffs, {c.c0, c.solver});
    std::string increments;
    for (double d : fit.increments) increments += fmt::format(" {:.3g}", d);
    report(7, fit.slope <= -1.0 && !fit.inconclusive,
           fmt::format("slope {:.4f}; increments{}; inconclusive {}", fit.slope, increments, fit.inconclusive),
           w.seconds());
  }

  // 8. Doubling control with the calibrated c0.
  {
    Stopwatch w;
    SolverConfig solver;
    solver.dt_initial = 1e-3;
    solver.cfl_safety = 0.01;
    const auto family = doubling_test_family(GridSpec(128, 16.0));
    bool pass = false;
    std::string detail;
    try {
      const CalibrationResult cal = calibrate_c0(family, 0.9, 8, solver);
      double worst = 0.0;
      for (double f : cal.energy_factors) worst = std::max(worst, f);
      pass = family.size() == 20 && worst <= 2.0 && cal.c0 == RunConfig{}.c0;
      detail = fmt::format("c0 = {} (shipped default {}); worst energy factor {:.4f} over {} members", cal.c0,
                           RunConfig{}.c0, worst, family.size());
    } catch (const Error& e) {
      detail = e.what();
    }
    report(8, pass, detail, w.seconds());
  }

  // 9. Rescaled profiles along the blowup run.
  {
    Stopwatch w;
    const MultiplierProfile profile(blow_config.cutoffs.front(), blow_config.s, blow_config.transition);
    const auto chosen = maximizing_checkpoints(blow.record);
    std::vector<RescaledProfile> profiles;
    const std::size_t k = static_cast<std::size_t>(blow_config.concentration.profiles);
    for (std::size_t i = chosen.size() >= k ? chosen.size() - k : 0; i < chosen.size(); ++i) {
      profiles.push_back(rescale_profile(chosen[i]->field, profile, chosen[i]->t));
    }
    bool grad_ok = profiles.size() == 5, decreasing = true;
    std::string grads;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      grad_ok = grad_ok && profiles[i].grad_v >= 0.9 && profiles[i].grad_v <= 1.0;
      if (i > 0) decreasing = decreasing && std::abs(profiles[i].energy_v) < std::abs(profiles[i - 1].energy_v);
      grads += fmt::format(" {:.4f}", profiles[i].grad_v);
    }
    const double limit = profiles.size() >= 3 ? limit_profile_mass(profiles, blow_config.concentration.rho) : 0.0;
    report(9, grad_ok && decreasing && limit >= 0.9 * q_norm,
           fmt::format("grad v{}; |E[v]| decreasing {}; limit mass {:.4f} vs {:.4f}", grads, decreasing, limit,
                       0.9 * q_norm),
           w.seconds());
  }

  // 10. Determinism from the manifest.
  {
    Stopwatch w;
    const fs::path root = fs::temp_directory_path() / "nlsblow_acceptance";
    fs::remove_all(root);
    int compared = 0;
    bool same = true;
    RunConfig small = blow_config;
    small.grid = GridSpec(128, 12.0);
    small.cutoffs = {8};
    small.solver.dt_initial = 5e-4;
    small.solver.cfl_safety = 0.02;
    small.solver.record_stride = 4;
    for (const RunConfig& c : {small, load_config(kConfigs / "theory.ini")}) {
      const fs::path first = root / (to_string(c.experiment) + "_first");
      const fs::path second = root / (to_string(c.experiment) + "_second");
      fs::create_directories(first);
      fs::create_directories(second);
      const RunOutcome outcome = run_experiment(c, first);
      write_manifest(first, c, 1, 0.0, outcome);
      run_experiment(config_from_manifest(first / "manifest.json"), second);
      same = same_csv(first, second, compared) && same;
    }
    report(10, same && compared == 4, fmt::format("{} CSV files compared, identical {}", compared, same),
           w.seconds());
  }

  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
