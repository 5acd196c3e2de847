#include "nlsblow/field.hpp"

#include "nlsblow/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace nlsblow {

namespace {

void check_size(const GridSpec& grid, std::size_t size) {
  if (size != grid.size()) {
    throw ConfigError("sample count " + std::to_string(size) + " does not match grid " +
                      std::to_string(grid.points()) + "^2");
  }
}

} // namespace

ComplexField2D::ComplexField2D(GridSpec grid) : grid_(grid), values_(grid.size()) {}

ComplexField2D::ComplexField2D(GridSpec grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  check_size(grid_, values_.size());
}

ComplexField2D ComplexField2D::sample(GridSpec grid,
                                      const std::function<Complex(double, double)>& f) {
  ComplexField2D out(grid);
  const int n = grid.points();
  for (int row = 0; row < n; ++row) {
    const double y = grid.coordinate(row);
    for (int col = 0; col < n; ++col) {
      out(row, col) = f(grid.coordinate(col), y);
    }
  }
  return out;
}

bool ComplexField2D::all_finite() const {
  for (const Complex& z : values_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexField2D ComplexField2D::scaled(Complex factor) const {
  ComplexField2D out = *this;
  for (Complex& z : out.values_) z *= factor;
  return out;
}

ComplexField2D ComplexField2D::shifted(int drow, int dcol) const {
  const int n = grid_.points();
  ComplexField2D out(grid_);
  for (int row = 0; row < n; ++row) {
    const int r = ((row + drow) % n + n) % n;
    for (int col = 0; col < n; ++col) {
      const int c = ((col + dcol) % n + n) % n;
      out(r, c) = (*this)(row, col);
    }
  }
  return out;
}

SpectrumField2D::SpectrumField2D(GridSpec grid) : grid_(grid), coefficients_(grid.size()) {}

SpectrumField2D::SpectrumField2D(GridSpec grid, std::vector<Complex> coefficients)
    : grid_(grid), coefficients_(std::move(coefficients)) {
  check_size(grid_, coefficients_.size());
}

double SpectrumField2D::magnitude(int row, int col) const {
  return std::hypot(grid_.wavenumber(row), grid_.wavenumber(col));
}

const std::vector<double>& wavenumber_magnitudes(const GridSpec& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::unique_ptr<std::vector<double>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{grid.points(), grid.extent()}];
  if (!slot) {
    const int n = grid.points();
    auto table = std::make_unique<std::vector<double>>(grid.size());
    for (int row = 0; row < n; ++row) {
      const double ky = grid.wavenumber(row);
      for (int col = 0; col < n; ++col) {
        (*table)[grid.index(row, col)] = std::hypot(grid.wavenumber(col), ky);
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

} // namespace nlsblow
