#include "nlsblow/multiplier.hpp"

#include "nlsblow/error.hpp"
#include "nlsblow/fft.hpp"
#include "nlsblow/functionals.hpp"

#include <cmath>
#include <string>

namespace nlsblow {

namespace {

const double kLog3 = std::log(3.0);

} // namespace

MultiplierProfile::MultiplierProfile(double cutoff, double s, Transition transition)
    : cutoff_(cutoff), s_(s), transition_(transition) {
  if (!(cutoff >= 1.0) || !std::isfinite(cutoff)) {
    throw ConfigError("multiplier cutoff N must be >= 1, got " + std::to_string(cutoff));
  }
  if (!(s > 0.0 && s < 1.0)) {
    throw ConfigError("multiplier regularity s must lie in (0, 1), got " + std::to_string(s));
  }

  constexpr int kRadii = 10000;
  const double log_span = std::log(1000.0 * cutoff_);
  double previous = 0.0;
  half_weight_monotone_ = true;
  for (int i = 0; i < kRadii; ++i) {
    const double x = std::exp(log_span * i / (kRadii - 1));
    const double value = (*this)(x) * std::pow(1.0 + x * x, 0.25);
    if (value < 1.0 || value < previous * (1.0 - 1e-14)) {
      half_weight_monotone_ = false;
      break;
    }
    previous = value;
  }
}

double MultiplierProfile::operator()(double xi) const {
  const double ratio = xi / cutoff_;
  if (ratio <= 1.0) return 1.0;
  if (ratio >= 3.0) return std::pow(ratio, s_ - 1.0);

  if (transition_ == Transition::log_hermite) {
    // log m(t) = (s-1) log3 (2t^2 - t^3): slopes 0 and (s-1) in log-log.
    const double t = std::log(ratio) / kLog3;
    return std::exp((s_ - 1.0) * kLog3 * t * t * (2.0 - t));
  }
  const double u = 0.5 * (ratio - 1.0);
  const double edge = std::pow(3.0, s_ - 1.0);
  const double edge_slope = (s_ - 1.0) * edge * (2.0 / 3.0);
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) + (-2.0 * u3 + 3.0 * u2) * edge + (u3 - u2) * edge_slope;
}

void require_representable(const MultiplierProfile& profile, const GridSpec& grid) {
  if (!(profile.cutoff() < grid.nyquist())) {
    throw ConfigError("multiplier cutoff N = " + std::to_string(profile.cutoff()) +
                      " is not below the grid Nyquist wavenumber " +
                      std::to_string(grid.nyquist()));
  }
}

ComplexField2D apply_I(const MultiplierProfile& profile, const ComplexField2D& u) {
  require_representable(profile, u.grid());
  return apply_symbol(u, [&profile](double k) { return Complex(profile(k)); });
}

ComplexField2D apply_I_D(const MultiplierProfile& profile, const ComplexField2D& u) {
  require_representable(profile, u.grid());
  return apply_symbol(u, [&profile](double k) {
    return Complex(profile(k) * std::sqrt(1.0 + k * k));
  });
}

double smoothed_d_norm(const MultiplierProfile& profile, const SpectrumField2D& u_hat) {
  require_representable(profile, u_hat.grid());
  return weighted_norm(u_hat, [&profile](double k) { return profile(k) * std::sqrt(1.0 + k * k); });
}

double smoothed_grad_norm(const MultiplierProfile& profile, const SpectrumField2D& u_hat) {
  require_representable(profile, u_hat.grid());
  return weighted_norm(u_hat, [&profile](double k) { return profile(k) * k; });
}

ComplexField2D lp_project(const ComplexField2D& u, int level) {
  if (level < 0) throw ConfigError("Littlewood-Paley level must be >= 0");
  const double center = std::ldexp(1.0, level);
  if (!(center < u.grid().nyquist())) {
    throw ConfigError("Littlewood-Paley level " + std::to_string(level) +
                      " lies above the grid Nyquist wavenumber");
  }
  const double lower = 0.5 * center;
  const double upper = 2.0 * center;
  return apply_symbol(u, [=](double k) {
    const bool inside = (k > lower && k < upper) || (level == 0 && k <= 0.5);
    return Complex(inside ? 1.0 : 0.0);
  });
}

int lp_band_count(const GridSpec& grid) {
  const double corner = std::sqrt(2.0) * grid.nyquist();
  int levels = 1;
  while (std::ldexp(1.0, levels - 1) < corner) ++levels;
  return levels;
}

ComplexField2D lp_band(const ComplexField2D& u, int level) {
  if (level < 0 || level >= lp_band_count(u.grid())) {
    throw ConfigError("dyadic band " + std::to_string(level) + " is outside the grid");
  }
  const double upper = std::ldexp(1.0, level);
  const double lower = level == 0 ? -1.0 : 0.5 * upper;
  return apply_symbol(u, [=](double k) { return Complex(k > lower && k <= upper ? 1.0 : 0.0); });
}

} // namespace nlsblow
