#pragma once

#include "nlsblow/field.hpp"
#include "nlsblow/random.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace nlsblow::testing {

inline ComplexField2D gaussian(const GridSpec& grid, double amplitude, double width = 1.0,
                               double cx = 0.0, double cy = 0.0) {
  return ComplexField2D::sample(grid, [=](double x, double y) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return Complex(amplitude * std::exp(-r2 / (width * width)));
  });
}

inline ComplexField2D random_field(const GridSpec& grid, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  std::vector<Complex> values(grid.size());
  for (Complex& z : values) z = Complex(normal(engine), normal(engine));
  return ComplexField2D(grid, std::move(values));
}

// Sum of a few randomly placed, randomly sized complex Gaussians.
inline ComplexField2D random_smooth_field(const GridSpec& grid, std::mt19937_64& engine) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int bumps = 1 + static_cast<int>(unit(engine) * 4);
  std::vector<std::array<double, 6>> params;
  for (int b = 0; b < bumps; ++b) {
    params.push_back({0.2 + 2.0 * unit(engine), 0.6 + 1.4 * unit(engine), 4.0 * (unit(engine) - 0.5),
                      4.0 * (unit(engine) - 0.5), 2.0 * (unit(engine) - 0.5), 2.0 * (unit(engine) - 0.5)});
  }
  return ComplexField2D::sample(grid, [&](double x, double y) {
    Complex sum;
    for (const auto& [a, w, cx, cy, kx, ky] : params) {
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      sum += a * std::exp(-r2 / (w * w)) * std::polar(1.0, kx * x + ky * y);
    }
    return sum;
  });
}

inline double relative_l2_error(const ComplexField2D& a, const ComplexField2D& b) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    diff += std::norm(a.values()[i] - b.values()[i]);
    norm += std::norm(b.values()[i]);
  }
  return norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
}

// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

} // namespace nlsblow::testing
