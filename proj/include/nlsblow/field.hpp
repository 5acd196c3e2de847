#pragma once

#include "nlsblow/grid.hpp"

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace nlsblow {

using Complex = std::complex<double>;

/// Samples u(x, y) on a periodic grid, row-major with row index along y.
class ComplexField2D {
public:
  explicit ComplexField2D(GridSpec grid);
  ComplexField2D(GridSpec grid, std::vector<Complex> values);

  /// Samples f(x, y) at every grid point.
  static ComplexField2D sample(GridSpec grid, const std::function<Complex(double, double)>& f);

  const GridSpec& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }

  Complex operator()(int row, int col) const { return values_[grid_.index(row, col)]; }
  Complex& operator()(int row, int col) { return values_[grid_.index(row, col)]; }

  bool all_finite() const;
  ComplexField2D scaled(Complex factor) const;

  /// Periodic shift of the samples by (drow, dcol).
  ComplexField2D shifted(int drow, int dcol) const;

private:
  GridSpec grid_;
  std::vector<Complex> values_;
};

/// Unitary Fourier coefficients, slots in FFT order (see GridSpec::wavenumber).
class SpectrumField2D {
public:
  explicit SpectrumField2D(GridSpec grid);
  SpectrumField2D(GridSpec grid, std::vector<Complex> coefficients);

  const GridSpec& grid() const { return grid_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  std::span<Complex> coefficients() { return coefficients_; }

  Complex operator()(int row, int col) const { return coefficients_[grid_.index(row, col)]; }
  Complex& operator()(int row, int col) { return coefficients_[grid_.index(row, col)]; }

  /// |xi| of slot (row, col).
  double magnitude(int row, int col) const;

private:
  GridSpec grid_;
  std::vector<Complex> coefficients_;
};

/// |xi| for every slot, row-major, cached per grid.
const std::vector<double>& wavenumber_magnitudes(const GridSpec& grid);

} // namespace nlsblow
