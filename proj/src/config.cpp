#include "nlsblow/config.hpp"

#include "nlsblow/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nlsblow {

namespace pt = boost::property_tree;

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::ground_state: return "ground_state";
    case Experiment::evolve: return "evolve";
    case Experiment::concentrate: return "concentrate";
    case Experiment::almost_conservation: return "almost_conservation";
    case Experiment::multiplier_audit: return "multiplier_audit";
    case Experiment::theory: return "theory";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', '_');
  for (Experiment e : {Experiment::ground_state, Experiment::evolve, Experiment::concentrate,
                       Experiment::almost_conservation, Experiment::multiplier_audit, Experiment::theory}) {
    if (to_string(e) == key) return e;
  }
  throw ConfigError(fmt::format("experiment: unknown value '{}'", name));
}

namespace {

std::string_view kind_name(const InitialData& initial) {
  static constexpr std::string_view names[] = {"gaussian", "townes", "file", "random_seeded", "rough_radial"};
  return names[initial.index()];
}

// Tracks which keys of each section were read so leftovers can be rejected.
class Reader {
public:
  explicit Reader(const pt::ptree& root) : root_(root) {}

  const std::string* find(const std::string& section, const std::string& key) {
    const pt::ptree* node = section.empty() ? &root_ : nullptr;
    if (!node) {
      const auto it = root_.find(section);
      if (it == root_.not_found() || it->second.empty()) return nullptr;
      node = &it->second;
    }
    const auto it = node->find(key);
    if (it == node->not_found() || !it->second.empty()) return nullptr;
    used_.insert(qualified(section, key));
    return &it->second.data();
  }

  void number(const std::string& section, const std::string& key, double& out) {
    if (const std::string* text = find(section, key)) out = parse_double(qualified(section, key), *text);
  }

  template <typename Int>
  void integer(const std::string& section, const std::string& key, Int& out) {
    if (const std::string* text = find(section, key)) {
      Int value{};
      const auto [end, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
      if (ec != std::errc{} || end != text->data() + text->size()) {
        throw ConfigError(fmt::format("{}: '{}' is not a valid integer", qualified(section, key), *text));
      }
      out = value;
    }
  }

  void boolean(const std::string& section, const std::string& key, bool& out) {
    if (const std::string* text = find(section, key)) {
      if (*text == "true") out = true;
      else if (*text == "false") out = false;
      else throw ConfigError(fmt::format("{}: expected true or false, got '{}'", qualified(section, key), *text));
    }
  }

  void text(const std::string& section, const std::string& key, std::string& out) {
    if (const std::string* value = find(section, key)) out = *value;
  }

  void reject_unused() const {
    for (const auto& [name, node] : root_) {
      if (node.empty()) {
        if (!used_.count(name)) throw ConfigError(fmt::format("{}: unknown key", name));
        continue;
      }
      for (const auto& [key, child] : node) {
        const std::string full = qualified(name, key);
        if (!used_.count(full)) throw ConfigError(fmt::format("{}: unknown key", full));
      }
    }
  }

  static std::string qualified(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  static double parse_double(const std::string& name, const std::string& text) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      throw ConfigError(fmt::format("{}: '{}' is not a valid number", name, text));
    }
    return value;
  }

private:
  const pt::ptree& root_;
  std::set<std::string> used_;
};

std::vector<double> parse_list(const std::string& name, const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError(fmt::format("{}: empty list entry", name));
    values.push_back(Reader::parse_double(name, item.substr(first, last - first + 1)));
  }
  if (values.empty()) throw ConfigError(fmt::format("{}: list is empty", name));
  return values;
}

InitialData read_initial(Reader& reader) {
  std::string kind = "gaussian";
  reader.text("initial", "kind", kind);
  if (kind == "gaussian") {
    GaussianData d;
    reader.number("initial", "amplitude", d.amplitude);
    reader.number("initial", "width", d.width);
    return d;
  }
  if (kind == "townes") {
    TownesData d;
    reader.number("initial", "tolerance", d.tolerance);
    return d;
  }
  if (kind == "file") {
    std::string path;
    reader.text("initial", "path", path);
    if (path.empty()) throw ConfigError("initial.path: required for kind = file");
    return FileData{path};
  }
  if (kind == "random_seeded") {
    RandomData d;
    reader.number("initial", "mass", d.mass);
    reader.number("initial", "decay", d.decay);
    reader.number("initial", "band_limit", d.band_limit);
    return d;
  }
  if (kind == "rough_radial") {
    RoughRadialData d;
    reader.number("initial", "mass", d.mass);
    reader.number("initial", "decay", d.decay);
    reader.number("initial", "envelope", d.envelope);
    reader.number("initial", "band_limit", d.band_limit);
    return d;
  }
  throw ConfigError(fmt::format("initial.kind: unknown value '{}'", kind));
}

void require(bool ok, std::string_view key, std::string_view rule) {
  if (!ok) throw ConfigError(fmt::format("{}: {}", key, rule));
}

} // namespace

void RunConfig::validate() const {
  require(s > 0.0 && s < 1.0, "s", "must lie in (0, 1)");
  require(!cutoffs.empty(), "cutoffs", "must not be empty");
  for (double n : cutoffs) require(n >= 1.0 && std::isfinite(n), "cutoffs", "entries must be finite and >= 1");
  if (experiment == Experiment::evolve || experiment == Experiment::concentrate) {
    require(cutoffs.front() < grid.nyquist(), "cutoffs", "first entry must be below the grid Nyquist wavenumber");
  }
  if (experiment == Experiment::almost_conservation) {
    require(cutoffs.size() >= 4, "cutoffs", "needs at least 4 entries");
    for (double n : cutoffs) require(n < 0.5 * grid.nyquist(), "cutoffs", "entries must be below Nyquist / 2");
  }
  require(t_end > 0.0 && std::isfinite(t_end), "solver.t_end", "must be positive");
  solver.validate();
  require(c0 > 0.0 && std::isfinite(c0), "window.c0", "must be positive");
  require(ground_state.tolerance > 0.0, "ground_state.tolerance", "must be positive");
  require(ground_state.dr > 0.0 && ground_state.dr < 1e-3, "ground_state.dr", "must lie in (0, 1e-3)");
  require(ground_state.r_max >= 15.0, "ground_state.r_max", "must be >= 15");
  require(concentration.rho > 0.0, "concentration.rho", "must be positive");
  require(concentration.profiles >= 3, "concentration.profiles", "must be >= 3");
  require(concentration.threshold >= 0.0, "concentration.threshold", "must be >= 0");
  require(audit.samples >= 1, "audit.samples", "must be >= 1");
  require(audit.constant > 0.0, "audit.constant", "must be positive");
  require(audit.radii >= 2, "audit.radii", "must be >= 2");
  require(theory.s_min > 0.0 && theory.s_min <= theory.s_max && theory.s_max <= 1.0, "theory.s_min",
          "need 0 < s_min <= s_max <= 1");
  require(theory.count >= 1, "theory.count", "must be >= 1");
  require(theory.epsilon >= 0.0 && theory.epsilon < 1.5, "theory.epsilon", "must lie in [0, 3/2)");
  if (const auto* file = std::get_if<FileData>(&initial)) {
    require(std::filesystem::exists(file->path), "initial.path", "file does not exist");
  }
}

RunConfig parse_config(std::string_view text) {
  pt::ptree root;
  std::istringstream stream{std::string(text)};
  try {
    pt::read_ini(stream, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
  }

  Reader reader(root);
  RunConfig config;
  std::string experiment;
  reader.text("", "experiment", experiment);
  if (experiment.empty()) throw ConfigError("experiment: required");
  config.experiment = parse_experiment(experiment);
  reader.number("", "s", config.s);
  if (const std::string* cutoffs = reader.find("", "cutoffs")) config.cutoffs = parse_list("cutoffs", *cutoffs);
  reader.integer("", "seed", config.seed);
  reader.text("", "output_dir", config.output_dir);

  int points = config.grid.points();
  double extent = config.grid.extent();
  reader.integer("grid", "points", points);
  reader.number("grid", "extent", extent);
  try {
    config.grid = GridSpec(points, extent);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("grid: {}", e.what()));
  }

  config.initial = read_initial(reader);

  SolverConfig& sv = config.solver;
  reader.number("solver", "t_end", config.t_end);
  reader.number("solver", "dt_initial", sv.dt_initial);
  reader.number("solver", "dt_floor", sv.dt_floor);
  reader.number("solver", "cfl_safety", sv.cfl_safety);
  reader.number("solver", "gradient_ceiling", sv.gradient_ceiling);
  reader.number("solver", "tail_threshold", sv.tail_threshold);
  reader.integer("solver", "record_stride", sv.record_stride);
  reader.boolean("solver", "nonlinear", sv.nonlinear);
  reader.number("solver", "checkpoint_growth", sv.checkpoint_growth);
  reader.boolean("solver", "strichartz_monitor", sv.strichartz_monitor);

  std::string transition = "log_hermite";
  reader.text("window", "transition", transition);
  if (transition == "log_hermite") config.transition = Transition::log_hermite;
  else if (transition == "linear_hermite") config.transition = Transition::linear_hermite;
  else throw ConfigError(fmt::format("window.transition: unknown value '{}'", transition));
  reader.number("window", "c0", config.c0);

  reader.number("ground_state", "tolerance", config.ground_state.tolerance);
  reader.number("ground_state", "dr", config.ground_state.dr);
  reader.number("ground_state", "r_max", config.ground_state.r_max);

  reader.number("concentration", "rho", config.concentration.rho);
  reader.integer("concentration", "profiles", config.concentration.profiles);
  reader.number("concentration", "threshold", config.concentration.threshold);

  reader.integer("audit", "samples", config.audit.samples);
  reader.number("audit", "constant", config.audit.constant);
  reader.integer("audit", "radii", config.audit.radii);

  reader.number("theory", "s_min", config.theory.s_min);
  reader.number("theory", "s_max", config.theory.s_max);
  reader.integer("theory", "count", config.theory.count);
  reader.number("theory", "epsilon", config.theory.epsilon);

  reader.reject_unused();
  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
  line("experiment", to_string(c.experiment));
  line("s", c.s);
  line("cutoffs", fmt::format("{}", fmt::join(c.cutoffs, ", ")));
  line("seed", c.seed);
  if (!c.output_dir.empty()) line("output_dir", c.output_dir);

  out += "\n[grid]\n";
  line("points", c.grid.points());
  line("extent", c.grid.extent());

  out += "\n[initial]\n";
  line("kind", kind_name(c.initial));
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, GaussianData>) {
          line("amplitude", d.amplitude);
          line("width", d.width);
        } else if constexpr (std::is_same_v<T, TownesData>) {
          line("tolerance", d.tolerance);
        } else if constexpr (std::is_same_v<T, FileData>) {
          line("path", d.path.string());
        } else if constexpr (std::is_same_v<T, RandomData>) {
          line("mass", d.mass);
          line("decay", d.decay);
          line("band_limit", d.band_limit);
        } else {
          line("mass", d.mass);
          line("decay", d.decay);
          line("envelope", d.envelope);
          line("band_limit", d.band_limit);
        }
      },
      c.initial);

  out += "\n[solver]\n";
  line("t_end", c.t_end);
  line("dt_initial", c.solver.dt_initial);
  line("dt_floor", c.solver.dt_floor);
  line("cfl_safety", c.solver.cfl_safety);
  line("gradient_ceiling", c.solver.gradient_ceiling);
  line("tail_threshold", c.solver.tail_threshold);
  line("record_stride", c.solver.record_stride);
  line("nonlinear", c.solver.nonlinear);
  line("checkpoint_growth", c.solver.checkpoint_growth);
  line("strichartz_monitor", c.solver.strichartz_monitor);

  out += "\n[window]\n";
  line("transition", c.transition == Transition::log_hermite ? "log_hermite" : "linear_hermite");
  line("c0", c.c0);

  out += "\n[ground_state]\n";
  line("tolerance", c.ground_state.tolerance);
  line("dr", c.ground_state.dr);
  line("r_max", c.ground_state.r_max);

  out += "\n[concentration]\n";
  line("rho", c.concentration.rho);
  line("profiles", c.concentration.profiles);
  line("threshold", c.concentration.threshold);

  out += "\n[audit]\n";
  line("samples", c.audit.samples);
  line("constant", c.audit.constant);
  line("radii", c.audit.radii);

  out += "\n[theory]\n";
  line("s_min", c.theory.s_min);
  line("s_max", c.theory.s_max);
  line("count", c.theory.count);
  line("epsilon", c.theory.epsilon);
  return out;
}

} // namespace nlsblow
