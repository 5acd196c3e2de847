#pragma once

#include <cstddef>
#include <numbers>

namespace nlsblow {

/// Periodic square box [-L/2, L/2)^2 sampled with n points per dimension.
class GridSpec {
public:
  /// Throws ConfigError unless n >= 16 is a power of two and L > 0.
  GridSpec(int points, double extent);

  int points() const { return points_; }
  double extent() const { return extent_; }
  double spacing() const { return extent_ / points_; }
  std::size_t size() const { return static_cast<std::size_t>(points_) * points_; }

  /// Physical coordinate of sample j along either axis.
  double coordinate(int j) const { return -0.5 * extent_ + j * spacing(); }

  /// Signed integer mode of FFT slot j: 0..n/2-1, then -n/2..-1.
  int mode(int j) const { return j < points_ / 2 ? j : j - points_; }

  /// Angular wavenumber 2*pi*k/L of FFT slot j.
  double wavenumber(int j) const { return 2.0 * std::numbers::pi * mode(j) / extent_; }

  /// Per-axis Nyquist wavenumber pi*n/L.
  double nyquist() const { return std::numbers::pi * points_ / extent_; }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * points_ + col;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
  int points_;
  double extent_;
};

} // namespace nlsblow
