#pragma once

#include "nlsblow/field.hpp"

#include <cstdint>
#include <filesystem>
#include <variant>

namespace nlsblow {

/// A exp(-|x|^2 / width^2), centered in the box.
struct GaussianData {
  double amplitude = 1.0;
  double width = 1.0;
};

/// Ground state computed on the target grid.
struct TownesData {
  double tolerance = 1e-10;
};

/// NLSFIELD v1 file; its grid must match.
struct FileData {
  std::filesystem::path path;
};

/// Complex Gaussian coefficients with radial envelope <xi>^{-decay} on |xi| <= band_limit,
/// rescaled to the requested mass.
struct RandomData {
  std::uint64_t seed = 1;
  double mass = 1.0;
  double decay = 2.0;
  double band_limit = 8.0;
};

/// Deterministic radial datum with slowly decaying spectrum: the kernel of
/// <D>^{-decay} times a Gaussian envelope, smoothly band-limited at band_limit,
/// rescaled to the requested mass.
struct RoughRadialData {
  double mass = 4.0;
  double decay = 2.0;
  double envelope = 1.5;
  double band_limit = 80.0;
};

using InitialData = std::variant<GaussianData, TownesData, FileData, RandomData, RoughRadialData>;

/// Throws ConfigError for invalid parameters or a mismatched file grid.
ComplexField2D make_initial(const GridSpec& grid, const InitialData& spec);

} // namespace nlsblow
