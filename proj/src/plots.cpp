#include "nlsblow/plots.hpp"

#include "nlsblow/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <string>

namespace nlsblow {

namespace fs = std::filesystem;

namespace {

constexpr const char* header =
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set grid\n";

void write_script(const fs::path& path, const std::string& png, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << "set terminal pngcairo size 900,600\n"
      << "set output '" << png << "'\n"
      << header << body;
}

} // namespace

std::vector<fs::path> emit_plots(const fs::path& run_dir) {
  const auto has = [&](const char* name) { return fs::is_regular_file(run_dir / name); };
  std::vector<fs::path> written;
  auto emit = [&](const char* script, const char* png, const std::string& body) {
    write_script(run_dir / script, png, body);
    written.push_back(run_dir / script);
  };

  if (has("series.csv")) {
    emit("diagnostics.gp", "diagnostics.png",
         "set xlabel 't'\n"
         "set logscale y\n"
         "plot 'series.csv' using 1:4 with lines title 'kinetic', \\\n"
         "     '' using 1:7 with lines title 'sigma', \\\n"
         "     '' using 1:5 with lines title 'lambda', \\\n"
         "     '' using 1:2 with lines title 'mass'\n");
    if (has("report.json")) {
      std::ifstream in(run_dir / "report.json");
      nlohmann::json report;
      in >> report;
      if (report.contains("t_star") && report["t_star"].is_number()) {
        const double t_star = report["t_star"].get<double>();
        emit("blowup_rate.gp", "blowup_rate.png",
             fmt::format("t_star = {:.17g}\n"
                         "set xlabel 'T* - t'\n"
                         "set logscale xy\n"
                         "plot 'series.csv' using (t_star - $1):(sqrt(2 * $4)) with linespoints title '|grad u|', \\\n"
                         "     '' using (t_star - $1):7 with linespoints title 'sigma', \\\n"
                         "     '' using (t_star - $1):(0.5 / (t_star - $1)**0.5) with lines dashtype 2 title 'slope -1/2'\n",
                         t_star));
      }
    }
  }
  if (has("concentration.csv")) {
    emit("concentration.gp", "concentration.png",
         "set xlabel 't'\n"
         "set ylabel 'L^2 mass'\n"
         "plot 'concentration.csv' using 1:3 with linespoints title 'ball', \\\n"
         "     '' using 1:4 with linespoints title 'cube sup'\n");
  }
  if (has("rescaled.csv")) {
    emit("rescaled.gp", "rescaled.png",
         "set xlabel 'sigma'\n"
         "set logscale x\n"
         "plot 'rescaled.csv' using 2:(abs($3)) with linespoints title '|E[v]|', \\\n"
         "     '' using 2:4 with linespoints title '|grad v|', \\\n"
         "     '' using 2:6 with linespoints title 'mass in rho'\n");
  }
  if (has("decay.csv")) {
    emit("decay.gp", "decay.png",
         "set xlabel 'N'\n"
         "set logscale xy\n"
         "f(x) = a + b * x\n"
         "fit f(x) 'decay.csv' using (log($1)):(log($2)) via a, b\n"
         "plot 'decay.csv' using 1:2 with points pt 7 title 'increment', \\\n"
         "     '' using 1:4 with points title 'noise floor', \\\n"
         "     exp(a) * x**b with lines title sprintf('slope %.2f', b)\n");
  }
  if (has("theory.csv")) {
    emit("p_of_s.gp", "p_of_s.png",
         "set xlabel 's'\n"
         "set ylabel 'p(s)'\n"
         "plot 'theory.csv' using 1:2 with linespoints title 'p(s)', 2 with lines dashtype 2 title 'p = 2'\n");
  }
  if (written.empty()) {
    throw ConfigError(fmt::format(
        "no plottable artifacts in '{}'; expected one of series.csv, concentration.csv, rescaled.csv, "
        "decay.csv, theory.csv",
        run_dir.string()));
  }
  return written;
}

} // namespace nlsblow
