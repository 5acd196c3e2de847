#include "nlsblow/functionals.hpp"

#include "nlsblow/error.hpp"
#include "nlsblow/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlsblow {

namespace {

double cell_area(const GridSpec& grid) { return grid.spacing() * grid.spacing(); }

double sum_weighted(const SpectrumField2D& u_hat, const std::function<double(double)>& weight) {
  const auto& xi = wavenumber_magnitudes(u_hat.grid());
  const auto coeffs = u_hat.coefficients();
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc += weight(xi[i]) * std::norm(coeffs[i]);
  return acc * cell_area(u_hat.grid());
}

} // namespace

double mass(const ComplexField2D& u) {
  double acc = 0.0;
  for (const Complex& z : u.values()) acc += std::norm(z);
  return acc * cell_area(u.grid());
}

double mass(const SpectrumField2D& u_hat) {
  double acc = 0.0;
  for (const Complex& z : u_hat.coefficients()) acc += std::norm(z);
  return acc * cell_area(u_hat.grid());
}

double kinetic(const SpectrumField2D& u_hat) {
  return 0.5 * sum_weighted(u_hat, [](double k) { return k * k; });
}

double kinetic(const ComplexField2D& u) { return kinetic(transform(u)); }

double l4norm4(const ComplexField2D& u) {
  double acc = 0.0;
  for (const Complex& z : u.values()) {
    const double a = std::norm(z);
    acc += a * a;
  }
  return acc * cell_area(u.grid());
}

double l6norm(const ComplexField2D& u) {
  double acc = 0.0;
  for (const Complex& z : u.values()) {
    const double a = std::norm(z);
    acc += a * a * a;
  }
  return std::cbrt(std::sqrt(acc * cell_area(u.grid())));
}

double energy(const ComplexField2D& u) { return kinetic(u) - 0.25 * l4norm4(u); }

double hs_norm(const SpectrumField2D& u_hat, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("H^s regularity must lie in (0, 1]");
  return std::sqrt(sum_weighted(u_hat, [s](double k) { return std::pow(1.0 + k * k, s); }));
}

double hs_norm(const ComplexField2D& u, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("H^s regularity must lie in (0, 1]");
  return hs_norm(transform(u), s);
}

double weighted_norm(const SpectrumField2D& u_hat, const std::function<double(double)>& weight) {
  return std::sqrt(sum_weighted(u_hat, [&weight](double k) {
    const double w = weight(k);
    return w * w;
  }));
}

double linf(const ComplexField2D& u) {
  double best = 0.0;
  for (const Complex& z : u.values()) best = std::max(best, std::norm(z));
  return std::sqrt(best);
}

std::pair<int, int> argmax_modulus(const ComplexField2D& u) {
  const auto values = u.values();
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::norm(values[i]);
    if (a > best_value) {
      best_value = a;
      best = i;
    }
  }
  const int n = u.grid().points();
  return {static_cast<int>(best / n), static_cast<int>(best % n)};
}

double variance(const ComplexField2D& u) {
  const GridSpec& grid = u.grid();
  const int n = grid.points();
  double acc = 0.0;
  for (int row = 0; row < n; ++row) {
    const double y = grid.coordinate(row);
    for (int col = 0; col < n; ++col) {
      const double x = grid.coordinate(col);
      acc += (x * x + y * y) * std::norm(u(row, col));
    }
  }
  return acc * cell_area(grid);
}

double boundary_amplitude(const ComplexField2D& u) {
  const double peak = linf(u);
  if (peak == 0.0) return 0.0;
  const int n = u.grid().points();
  double edge = 0.0;
  for (int j = 0; j < n; ++j) {
    edge = std::max({edge, std::abs(u(0, j)), std::abs(u(j, 0))});
  }
  return edge / peak;
}

double tail_fraction(const SpectrumField2D& u_hat) {
  const double total = mass(u_hat);
  if (total == 0.0) return 0.0;
  const double edge = 2.0 / 3.0 * u_hat.grid().nyquist();
  const double tail = sum_weighted(u_hat, [edge](double k) { return k > edge ? 1.0 : 0.0; });
  return tail / total;
}

BallMass mass_in_ball(const ComplexField2D& u, double radius, double center_x, double center_y) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  const GridSpec& grid = u.grid();
  const int n = grid.points();
  const double L = grid.extent();
  auto wrap = [L](double d) { return d - L * std::floor(d / L + 0.5); };
  const double r2 = radius * radius;
  double acc = 0.0;
  for (int row = 0; row < n; ++row) {
    const double dy = wrap(grid.coordinate(row) - center_y);
    if (dy * dy >= r2) continue;
    for (int col = 0; col < n; ++col) {
      const double dx = wrap(grid.coordinate(col) - center_x);
      if (dx * dx + dy * dy < r2) acc += std::norm(u(row, col));
    }
  }
  return {std::sqrt(acc * cell_area(grid)), radius > 0.5 * L};
}

double sup_mass_over_cubes(const ComplexField2D& u, double side) {
  if (!(side > 0.0)) throw DomainError("cube side must be positive");
  const GridSpec& grid = u.grid();
  const int n = grid.points();
  const int cells = std::clamp(static_cast<int>(std::floor(side / grid.spacing() + 1e-9)), 1, n);

  // Periodic summed-area table over a (n + cells)^2 extension.
  const int m = n + cells;
  std::vector<double> table(static_cast<std::size_t>(m + 1) * (m + 1), 0.0);
  auto at = [m](int r, int c) { return static_cast<std::size_t>(r) * (m + 1) + c; };
  for (int r = 0; r < m; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c < m; ++c) {
      row_sum += std::norm(u(r % n, c % n));
      table[at(r + 1, c + 1)] = table[at(r, c + 1)] + row_sum;
    }
  }
  double best = 0.0;
  const int starts = cells == n ? 1 : n;
  for (int r = 0; r < starts; ++r) {
    for (int c = 0; c < starts; ++c) {
      const double s = table[at(r + cells, c + cells)] - table[at(r, c + cells)] -
                       table[at(r + cells, c)] + table[at(r, c)];
      best = std::max(best, s);
    }
  }
  return std::sqrt(best * cell_area(grid));
}

} // namespace nlsblow
