#pragma once

#include "nlsblow/field.hpp"

namespace nlsblow {

/// Shape of the smoothing symbol on the band N < |xi| < 3N.
enum class Transition {
  /// Cubic Hermite of log m against log(|xi|/N) (default).
  log_hermite,
  /// Cubic Hermite of m against |xi|; used to check insensitivity to the band shape.
  linear_hermite,
};

/// Radial symbol m(xi) of the smoothing operator I_N:
///   m = 1 for |xi| <= N,  m = (|xi|/N)^(s-1) for |xi| >= 3N,
/// joined by a monotone C^1 piece on the band. Immutable after construction.
class MultiplierProfile {
public:
  /// Throws ConfigError unless cutoff >= 1 and 0 < s < 1.
  MultiplierProfile(double cutoff, double s, Transition transition = Transition::log_hermite);

  double cutoff() const { return cutoff_; }
  double regularity() const { return s_; }
  Transition transition() const { return transition_; }

  /// m(|xi|), in (0, 1].
  double operator()(double xi) const;

  /// Whether m(x) <x>^{1/2} was nondecreasing and >= 1 on 10^4 log-spaced
  /// radii in [1, 10^3 N] at construction. Holds for s above roughly 0.63.
  bool half_weight_monotone() const { return half_weight_monotone_; }

private:
  double cutoff_;
  double s_;
  Transition transition_;
  bool half_weight_monotone_ = false;
};

/// Throws ConfigError if N is not below the grid's Nyquist wavenumber.
void require_representable(const MultiplierProfile& profile, const GridSpec& grid);

/// I_N u
ComplexField2D apply_I(const MultiplierProfile& profile, const ComplexField2D& u);
/// I_N <D> u, symbol m(xi) (1 + |xi|^2)^{1/2}
ComplexField2D apply_I_D(const MultiplierProfile& profile, const ComplexField2D& u);

/// ||I_N <D> u||_{L^2} and ||I_N grad u||_{L^2} straight from coefficients.
double smoothed_d_norm(const MultiplierProfile& profile, const SpectrumField2D& u_hat);
double smoothed_grad_norm(const MultiplierProfile& profile, const SpectrumField2D& u_hat);

/// Littlewood-Paley projection with the sharp annulus 2^(j-1) < |xi| < 2^(j+1);
/// level 0 also keeps |xi| <= 1/2. Adjacent levels overlap.
ComplexField2D lp_project(const ComplexField2D& u, int level);

/// Disjoint dyadic band: level 0 is |xi| <= 1, level j >= 1 is 2^(j-1) < |xi| <= 2^j.
/// Levels 0..lp_band_count(grid)-1 partition every wavenumber on the grid.
ComplexField2D lp_band(const ComplexField2D& u, int level);
int lp_band_count(const GridSpec& grid);

} // namespace nlsblow
