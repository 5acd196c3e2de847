#include "nlsblow/audit.hpp"

#include "nlsblow/error.hpp"
#include "nlsblow/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>
#include <vector>

namespace nlsblow {

void to_json(nlohmann::json& j, const AuditReport& report) {
  j = nlohmann::json{{"regime", report.regime},       {"samples", report.samples},
                     {"max_ratio", report.max_ratio}, {"violations", report.violations},
                     {"seed", report.seed},           {"constant", report.constant}};
}

namespace {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  double norm() const { return std::hypot(x, y); }
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
};

class Sampler {
public:
  explicit Sampler(std::mt19937_64& engine) : engine_(engine) {}

  /// Random direction, radius log-uniform in [lo, hi].
  Vec2 log_radius(double lo, double hi) {
    const double r = std::exp(std::log(lo) + unit_(engine_) * (std::log(hi) - std::log(lo)));
    return polar(r);
  }
  /// Uniform in the disk of radius r.
  Vec2 disk(double r) { return polar(r * std::sqrt(unit_(engine_))); }

private:
  Vec2 polar(double r) {
    const double angle = 2.0 * std::numbers::pi * unit_(engine_);
    return {r * std::cos(angle), r * std::sin(angle)};
  }

  std::mt19937_64& engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// Evaluates `ratio` on `options.samples` draws split into fixed chunks with
/// their own substreams, so the outcome does not depend on options.jobs.
AuditReport run_audit(std::string regime, const AuditOptions& options, double threshold,
                      const std::function<double(Sampler&)>& ratio) {
  if (options.samples == 0) throw ConfigError("audit needs at least one sample");
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (options.samples + kChunk - 1) / kChunk;
  std::vector<double> chunk_max(chunks, 0.0);
  std::vector<std::size_t> chunk_violations(chunks, 0);

  auto work = [&](std::size_t first) {
    for (std::size_t c = first; c < chunks; c += static_cast<std::size_t>(std::max(1, options.jobs))) {
      auto engine = substream(options.seed, c);
      Sampler sampler(engine);
      const std::size_t count = std::min(kChunk, options.samples - c * kChunk);
      for (std::size_t i = 0; i < count; ++i) {
        const double value = ratio(sampler);
        chunk_max[c] = std::max(chunk_max[c], value);
        if (!(value <= threshold)) ++chunk_violations[c];
      }
    }
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> workers;
    for (int j = 0; j < jobs; ++j) workers.emplace_back(work, static_cast<std::size_t>(j));
  }

  AuditReport report;
  report.regime = std::move(regime);
  report.samples = options.samples;
  report.seed = options.seed;
  report.constant = threshold;
  report.max_ratio = *std::max_element(chunk_max.begin(), chunk_max.end());
  for (std::size_t v : chunk_violations) report.violations += v;
  return report;
}

} // namespace

AuditReport audit_case1_vanishing(const MultiplierProfile& m, const AuditOptions& options) {
  const double N = m.cutoff();
  return run_audit("quadrilinear_case1_vanishing", options, 0.0, [&](Sampler& draw) {
    const Vec2 xi2 = draw.disk(0.25 * N);
    const Vec2 xi3 = draw.disk(0.25 * N);
    const Vec2 xi4 = draw.disk(0.25 * N);
    const Vec2 xi1 = -(xi2 + xi3 + xi4);
    return std::abs(1.0 - m(xi1.norm()) / (m(xi2.norm()) * m(xi3.norm()) * m(xi4.norm())));
  });
}

AuditReport audit_case2_bound(const MultiplierProfile& m, const AuditOptions& options) {
  const double N = m.cutoff();
  return run_audit("quadrilinear_case2_mean_value", options, options.constant, [&](Sampler& draw) {
    const Vec2 xi2 = draw.log_radius(N, 100.0 * N);
    Vec2 xi3 = draw.log_radius(1e-3 * N, N / 8.0);
    Vec2 xi4 = draw.log_radius(1e-3 * N, N / 8.0);
    if (xi4.norm() > xi3.norm()) std::swap(xi3, xi4);
    const Vec2 xi1 = -(xi2 + xi3 + xi4);
    const double factor =
        std::abs(1.0 - m(xi1.norm()) / (m(xi2.norm()) * m(xi3.norm()) * m(xi4.norm())));
    return factor * xi2.norm() / xi3.norm();
  });
}

AuditReport audit_trivial_bound(const MultiplierProfile& m, const AuditOptions& options) {
  const double N = m.cutoff();
  return run_audit("quadrilinear_trivial", options, 1.0 + 1e-12, [&](Sampler& draw) {
    Vec2 xi2 = draw.log_radius(N, 100.0 * N);
    Vec2 xi3 = draw.log_radius(N, 100.0 * N);
    if (xi3.norm() > xi2.norm()) std::swap(xi2, xi3);
    const Vec2 xi4 = draw.disk(xi3.norm());
    const Vec2 xi1 = -(xi2 + xi3 + xi4);
    const double x = m(xi1.norm()) / (m(xi2.norm()) * m(xi3.norm()) * m(xi4.norm()));
    return std::abs(1.0 - x) / x;
  });
}

AuditReport audit_sextilinear_bound(const MultiplierProfile& m, const AuditOptions& options) {
  const double N = m.cutoff();
  return run_audit("sextilinear_case2", options, options.constant, [&](Sampler& draw) {
    const Vec2 xi4 = draw.log_radius(N, 100.0 * N);
    Vec2 xi5 = draw.log_radius(1e-3 * N, N);
    Vec2 xi6 = draw.log_radius(1e-3 * N, N);
    if (xi6.norm() > xi5.norm()) std::swap(xi5, xi6);
    const Vec2 xi123 = -(xi4 + xi5 + xi6);
    const double factor =
        std::abs(1.0 - m(xi123.norm()) / (m(xi4.norm()) * m(xi5.norm()) * m(xi6.norm())));
    return factor * xi4.norm() / xi5.norm();
  });
}

AuditReport audit_half_weight(const MultiplierProfile& m, std::size_t radii) {
  if (radii < 2) throw ConfigError("half-weight audit needs at least two radii");
  AuditReport report;
  report.regime = "half_weight_monotone";
  report.samples = radii;
  report.constant = 0.0;
  const double log_span = std::log(1000.0 * m.cutoff());
  double previous = 0.0;
  for (std::size_t i = 0; i < radii; ++i) {
    const double x = std::exp(log_span * static_cast<double>(i) / static_cast<double>(radii - 1));
    const double value = m(x) * std::pow(1.0 + x * x, 0.25);
    if (value < 1.0) ++report.violations;
    if (i > 0) {
      const double drop = (previous - value) / previous;
      report.max_ratio = std::max(report.max_ratio, drop);
      if (drop > 1e-14) ++report.violations;
    }
    previous = value;
  }
  return report;
}

} // namespace nlsblow
