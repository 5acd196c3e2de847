#include "nlsblow/initial.hpp"

#include "nlsblow/checkpoint.hpp"
#include "nlsblow/error.hpp"
#include "nlsblow/fft.hpp"
#include "nlsblow/functionals.hpp"
#include "nlsblow/ground_state.hpp"
#include "nlsblow/random.hpp"

#include <fmt/format.h>

#include <cmath>

namespace nlsblow {

namespace {

ComplexField2D normalized(ComplexField2D u, double target_mass) {
  const double current = mass(u);
  if (!(current > 0.0)) throw ConfigError("initial data vanishes on this grid");
  return u.scaled(std::sqrt(target_mass / current));
}

void require_band(const GridSpec& grid, double band_limit) {
  if (!(band_limit > 0.0 && band_limit < 2.0 / 3.0 * grid.nyquist())) {
    throw ConfigError(fmt::format("initial.band_limit must lie in (0, {:.6g})", 2.0 / 3.0 * grid.nyquist()));
  }
}

ComplexField2D build(const GridSpec& grid, const GaussianData& d) {
  if (!std::isfinite(d.amplitude)) throw ConfigError("initial.amplitude must be finite");
  if (!(d.width > 0.0)) throw ConfigError("initial.width must be positive");
  const double w2 = d.width * d.width;
  return ComplexField2D::sample(grid, [&](double x, double y) {
    return Complex(d.amplitude * std::exp(-(x * x + y * y) / w2));
  });
}

ComplexField2D build(const GridSpec& grid, const TownesData& d) {
  if (!(d.tolerance > 0.0)) throw ConfigError("initial.tolerance must be positive");
  return solve_petviashvili(grid, d.tolerance).field;
}

ComplexField2D build(const GridSpec& grid, const FileData& d) {
  if (!std::filesystem::exists(d.path)) {
    throw ConfigError(fmt::format("initial.path '{}' does not exist", d.path.string()));
  }
  TimedField loaded = load_field(d.path);
  if (!(loaded.field.grid() == grid)) {
    throw ConfigError(fmt::format("initial.path '{}' holds a {}-point grid of extent {}, expected {} and {}",
                                  d.path.string(), loaded.field.grid().points(), loaded.field.grid().extent(),
                                  grid.points(), grid.extent()));
  }
  return std::move(loaded.field);
}

ComplexField2D build(const GridSpec& grid, const RandomData& d) {
  if (!(d.mass > 0.0)) throw ConfigError("initial.mass must be positive");
  if (!(d.decay >= 0.0)) throw ConfigError("initial.decay must be nonnegative");
  require_band(grid, d.band_limit);
  std::mt19937_64 engine = substream(d.seed, 0);
  std::normal_distribution<double> normal;
  SpectrumField2D spectrum(grid);
  auto coeffs = spectrum.coefficients();
  const auto& xi = wavenumber_magnitudes(grid);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double re = normal(engine), im = normal(engine);
    if (xi[i] <= d.band_limit) coeffs[i] = Complex(re, im) * std::pow(1.0 + xi[i] * xi[i], -0.5 * d.decay);
  }
  return normalized(inverse(spectrum), d.mass);
}

ComplexField2D build(const GridSpec& grid, const RoughRadialData& d) {
  if (!(d.mass > 0.0)) throw ConfigError("initial.mass must be positive");
  if (!(d.decay > 1.0)) throw ConfigError("initial.decay must exceed 1");
  if (!(d.envelope > 0.0)) throw ConfigError("initial.envelope must be positive");
  require_band(grid, d.band_limit);
  const double half = 0.5 * grid.extent();
  const double w2 = d.envelope * d.envelope;
  // Centre the kernel so the datum is radial about the box center.
  SpectrumField2D kernel(grid);
  for (int row = 0; row < grid.points(); ++row) {
    for (int col = 0; col < grid.points(); ++col) {
      const double k = kernel.magnitude(row, col);
      const double phase = (grid.wavenumber(row) + grid.wavenumber(col)) * half;
      kernel(row, col) = std::pow(1.0 + k * k, -0.5 * d.decay) * std::polar(1.0, phase);
    }
  }
  ComplexField2D u = inverse(kernel);
  for (int row = 0; row < grid.points(); ++row) {
    const double y = grid.coordinate(row);
    for (int col = 0; col < grid.points(); ++col) {
      const double x = grid.coordinate(col);
      u(row, col) = Complex(u(row, col).real() * std::exp(-(x * x + y * y) / w2));
    }
  }
  const double kc = d.band_limit;
  u = apply_symbol(u, [kc](double k) { return Complex(std::exp(-std::pow(k / kc, 8))); });
  return normalized(std::move(u), d.mass);
}

} // namespace

ComplexField2D make_initial(const GridSpec& grid, const InitialData& spec) {
  return std::visit([&](const auto& d) { return build(grid, d); }, spec);
}

} // namespace nlsblow
