#pragma once

#include "nlsblow/checkpoint.hpp"
#include "nlsblow/error.hpp"
#include "nlsblow/field.hpp"
#include "nlsblow/multiplier.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace nlsblow {

/// Non-finite values appeared during time stepping; carries the last finite state.
class InstabilityError : public Error {
public:
  InstabilityError(const std::string& what, TimedField last) : Error(what), last_(std::move(last)) {}
  const TimedField& last_checkpoint() const { return last_; }

private:
  TimedField last_;
};

struct SolverConfig {
  double dt_initial = 1e-3;        // step cap
  double dt_floor = 1e-9;          // halt when the adaptive step falls below this
  double cfl_safety = 0.1;         // nonlinear phase advance per step, radians
  double gradient_ceiling = 1e8;   // halt once the kinetic energy exceeds this
  double tail_threshold = 1e-6;    // halt once the outer-third annulus carries this mass fraction
  int record_stride = 1;           // steps between diagnostic samples
  bool nonlinear = true;           // false evolves the free equation
  double checkpoint_growth = 1.25; // kinetic growth factor between stored checkpoints; 0 disables
  bool strichartz_monitor = false; // also record ||I <D> u||_{L^6}

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

enum class StopReason { gradient_ceiling, dt_floor, tail_unresolved, t_end_reached };

std::string to_string(StopReason reason);
bool indicates_blowup(StopReason reason);

struct DiagnosticSample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;   // NLS energy, also for free evolutions
  double kinetic = 0.0;
  double lambda = 0.0;   // ||u||_{H^s}
  double Lambda = 0.0;   // running sup of lambda
  double sigma = 0.0;    // ||I_N <D> u||_{L^2}
  double Sigma = 0.0;    // running sup of sigma
  double tail = 0.0;
  double boundary = 0.0;
  double variance = 0.0;
  double strichartz_l6 = std::numeric_limits<double>::quiet_NaN();  // ||I_N <D> u||_{L^6}
};

struct Checkpoint {
  double t = 0.0;
  std::size_t sample = 0;  // index of the matching DiagnosticSample
  ComplexField2D field;
};

struct TrajectoryRecord {
  GridSpec grid;
  MultiplierProfile profile;  // defines s for lambda and (N, s) for sigma
  bool nonlinear = true;
  std::vector<DiagnosticSample> samples;
  std::vector<Checkpoint> checkpoints;

  const DiagnosticSample& front() const { return samples.front(); }
  const DiagnosticSample& back() const { return samples.back(); }
};

/// CSV with header t,mass,energy,kinetic,lambda,Lambda,sigma,Sigma,tail,boundary,variance.
void write_series_csv(std::ostream& out, const TrajectoryRecord& record);

struct BlowupReport {
  double t_star = std::numeric_limits<double>::quiet_NaN();
  double fit_exponent_kinetic = std::numeric_limits<double>::quiet_NaN();
  double fit_exponent_sigma = std::numeric_limits<double>::quiet_NaN();
  StopReason stop_reason = StopReason::t_end_reached;
  std::size_t steps = 0;
  double last_time = 0.0;
  double mass_drift = 0.0;    // max |M(t) - M(0)| / M(0)
  double energy_drift = 0.0;  // max |E(t) - E(0)| / max(|E(0)|, K(0))
  bool valid = true;          // energy_drift <= 1e-4
  std::string note;           // why t_star is missing, when it is
};

void to_json(nlohmann::json& j, const BlowupReport& report);

struct EvolveResult {
  TrajectoryRecord record;
  BlowupReport report;
};

/// One Strang step: half nonlinear phase, exact free propagator, half nonlinear phase.
ComplexField2D step_strang(const ComplexField2D& u, double dt, bool nonlinear = true);

/// Called with every state that is recorded as a sample.
using SampleObserver = std::function<void(const DiagnosticSample&, const ComplexField2D&)>;

/// Adaptive evolution with dt = min(dt_initial, cfl_safety / ||u||_inf^2), ending
/// at t_end or at the first halting condition. A step that would breach the tail
/// or gradient limits is discarded, so the record ends on the last resolved state.
EvolveResult evolve(const ComplexField2D& u0, const SolverConfig& config, double t_end,
                    const MultiplierProfile& profile, const SampleObserver& observer = {});

/// t-intercept of a least-squares line through 1/kinetic over the last `window`
/// samples. Throws EstimationError unless kinetic increases strictly there.
double estimate_t_star(const TrajectoryRecord& record, std::size_t window = 10);

struct ExponentFit {
  double kinetic = 0.0;  // alpha in ||grad u|| ~ (T* - t)^{-alpha}
  double sigma = 0.0;    // same for sigma(t)
};

/// Log-log least squares over the last `window` samples with t < t_star.
ExponentFit fit_blowup_exponents(const TrajectoryRecord& record, double t_star,
                                 std::size_t window = 20);

/// c0 * ||I_N grad u0||^{-2/s}.
double lwp_window(const ComplexField2D& u0, double s, const MultiplierProfile& profile, double c0);

struct DoublingResult {
  double energy_factor = 0.0;      // sup sigma(t) / sigma(0) on the window
  double strichartz_factor = 0.0;  // (sum dt ||I<D>u||_{L^6}^3)^{1/3} / sigma(0)
  bool passed() const { return energy_factor <= 2.0 && strichartz_factor <= 2.0; }
};

/// Throws DomainError if the window outruns the record, ConfigError if the
/// record has no L^6 monitor.
DoublingResult doubling_check(const TrajectoryRecord& record, double window);

struct VarianceCheck {
  double max_abs_deviation = 0.0;  // max |V'' - target| over interior samples
  double target = 0.0;             // 16 E(0), or 16 K(0) for the free flow
  double relative = 0.0;           // deviation / |target|, or / (16 K(0)) when target ~ 0
};

/// Nonuniform three-point second differences of V(t) for samples with t <= t_max.
/// Needs at least 5 samples.
VarianceCheck variance_check(const TrajectoryRecord& record,
                             double t_max = std::numeric_limits<double>::infinity());

} // namespace nlsblow
