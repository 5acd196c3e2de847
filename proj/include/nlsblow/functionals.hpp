#pragma once

#include "nlsblow/field.hpp"

#include <utility>

namespace nlsblow {

// Quadrature is the rectangle rule on the periodic grid.

/// ||u||_{L^2}^2
double mass(const ComplexField2D& u);
double mass(const SpectrumField2D& u_hat);

/// (1/2) ||grad u||_{L^2}^2, computed spectrally.
double kinetic(const ComplexField2D& u);
double kinetic(const SpectrumField2D& u_hat);

/// ||u||_{L^4}^4
double l4norm4(const ComplexField2D& u);

/// ||u||_{L^6}
double l6norm(const ComplexField2D& u);

/// kinetic - (1/4) ||u||_{L^4}^4
double energy(const ComplexField2D& u);

/// ||<D>^s u||_{L^2}; s must lie in (0, 1].
double hs_norm(const ComplexField2D& u, double s);
double hs_norm(const SpectrumField2D& u_hat, double s);

/// sqrt(h^2 sum |w(xi)|^2 |u_hat|^2) for a real radial weight w.
double weighted_norm(const SpectrumField2D& u_hat, const std::function<double(double)>& weight);

double linf(const ComplexField2D& u);

/// Grid indices (row, col) of max |u|; first occurrence in row-major order.
std::pair<int, int> argmax_modulus(const ComplexField2D& u);

/// int |x|^2 |u|^2 with x measured from the box center.
double variance(const ComplexField2D& u);

/// Largest |u| on the box edge divided by max |u| (0 for the zero field).
double boundary_amplitude(const ComplexField2D& u);

/// Fraction of the mass carried by |xi| > (2/3) * Nyquist.
double tail_fraction(const SpectrumField2D& u_hat);

struct BallMass {
  double value = 0.0;         // (int_{|x-c|<r} |u|^2)^{1/2}
  bool wrap_warning = false;  // radius exceeds half the box
};

/// L^2 mass in a disk using the minimum-image distance to the center and an
/// indicator mask at grid resolution.
BallMass mass_in_ball(const ComplexField2D& u, double radius, double center_x, double center_y);

/// Max over all grid-aligned squares of the given side (stride h, periodic)
/// of the L^2 mass inside the square. Side is floored to whole cells (>= 1).
double sup_mass_over_cubes(const ComplexField2D& u, double side);

} // namespace nlsblow
