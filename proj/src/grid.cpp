#include "nlsblow/grid.hpp"

#include "nlsblow/error.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace nlsblow {

GridSpec::GridSpec(int points, double extent) : points_(points), extent_(extent) {
  if (points < 16 || !std::has_single_bit(static_cast<unsigned>(points))) {
    throw ConfigError("grid points must be a power of two >= 16, got " + std::to_string(points));
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw ConfigError("grid extent must be positive and finite");
  }
}

} // namespace nlsblow
