#pragma once

#include "nlsblow/field.hpp"

#include <filesystem>
#include <iosfwd>

namespace nlsblow {

struct TimedField {
  double t = 0.0;
  ComplexField2D field;
};

// NLSFIELD v1: ASCII header line "NLSFIELD v1 n L t", then n^2 little-endian
// (re, im) double pairs in row-major order.
void write_field(std::ostream& out, const ComplexField2D& field, double t);
TimedField read_field(std::istream& in);

void save_field(const std::filesystem::path& path, const ComplexField2D& field, double t);
TimedField load_field(const std::filesystem::path& path);

} // namespace nlsblow
