#include "nlsblow/checkpoint.hpp"

#include "nlsblow/error.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nlsblow {

static_assert(std::endian::native == std::endian::little,
              "NLSFIELD payloads are written as native little-endian doubles");

void write_field(std::ostream& out, const ComplexField2D& field, double t) {
  const GridSpec& grid = field.grid();
  out << fmt::format("NLSFIELD v1 {} {:.17g} {:.17g}\n", grid.points(), grid.extent(), t);
  const auto values = field.values();
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(Complex)));
  if (!out) throw ConfigError("failed writing field payload");
}

TimedField read_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("missing NLSFIELD header");
  std::istringstream parts(header);
  std::string magic, version;
  int n = 0;
  double L = 0.0, t = 0.0;
  if (!(parts >> magic >> version >> n >> L >> t) || magic != "NLSFIELD" || version != "v1") {
    throw ConfigError("malformed NLSFIELD header: '" + header + "'");
  }
  GridSpec grid(n, L);
  std::vector<Complex> values(grid.size());
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(Complex)));
  if (in.gcount() != static_cast<std::streamsize>(values.size() * sizeof(Complex))) {
    throw ConfigError("truncated NLSFIELD payload");
  }
  return {t, ComplexField2D(grid, std::move(values))};
}

void save_field(const std::filesystem::path& path, const ComplexField2D& field, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  write_field(out, field, t);
}

TimedField load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open field file " + path.string());
  return read_field(in);
}

} // namespace nlsblow
