#include "bolab/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "bolab/errors.hpp"
#include "bolab/experiments.hpp"
#include "bolab/littlewood_paley.hpp"
#include "bolab/random.hpp"

namespace bolab {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

// Parse errors inside setters carry no line; the caller prefixes it.
struct ValueError {
  std::string message;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ValueError{"expected a number, got '" + s + "'"};
  }
  return v;
}

long to_long(const std::string& s) {
  long v = 0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ValueError{"expected an integer, got '" + s + "'"};
  }
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ValueError{"expected a non-negative integer, got '" + s + "'"};
  }
  return v;
}

std::size_t to_size(const std::string& s) { return static_cast<std::size_t>(to_u64(s)); }

bool to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ValueError{"expected true or false, got '" + s + "'"};
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
  return out;
}

// Modes as "k:cos:sin" items.
std::vector<FourierMode> to_modes(const std::string& s) {
  std::vector<FourierMode> out;
  if (s.empty()) return out;
  for (const auto& item : split_list(s)) {
    const auto a = item.find(':');
    const auto b = a == std::string::npos ? a : item.find(':', a + 1);
    if (b == std::string::npos) throw ValueError{"mode '" + item + "' is not k:cos:sin"};
    out.push_back({to_long(trim(item.substr(0, a))), to_double(trim(item.substr(a + 1, b - a - 1))),
                   to_double(trim(item.substr(b + 1)))});
  }
  return out;
}

std::string join_modes(const std::vector<FourierMode>& modes) {
  std::string out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    out += (i ? ", " : "") + std::to_string(modes[i].k) + ":" + format_double(modes[i].cos_amp) +
           ":" + format_double(modes[i].sin_amp);
  }
  return out;
}

using Kinds = std::vector<std::string>;

struct Field {
  std::string section;
  std::string key;
  // Kinds of the section this key applies to; empty means always.
  Kinds kinds;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<std::string>& section_order() {
  static const std::vector<std::string> order = {"",           "grid",    "initial", "background",
                                                 "forcing",    "solver",  "norms"};
  return order;
}

const std::map<std::string, Kinds>& section_kinds() {
  static const std::map<std::string, Kinds> kinds = {
      {"initial", {"zero", "gaussian", "random", "travelling_wave"}},
      {"background", {"zero", "bore", "periodic_static", "periodic_evolving", "zhidkov"}},
      {"forcing", {"zero", "derived", "topography"}},
  };
  return kinds;
}

const std::string& section_kind(const RunConfig& c, const std::string& section) {
  static const std::string none;
  if (section == "initial") return c.initial.kind;
  if (section == "background") return c.background.kind;
  if (section == "forcing") return c.forcing.kind;
  return none;
}

#define BOLAB_DOUBLE(sec, member, name, kinds)                                         \
  Field {                                                                              \
    sec, name, kinds, [](RunConfig& c, const std::string& v) { c.member = to_double(v); }, \
        [](const RunConfig& c) { return format_double(c.member); }                     \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    const Kinds gaussian_k = {"gaussian"}, random_k = {"random"}, wave_k = {"travelling_wave"};
    const Kinds bore_k = {"bore"}, periodic_k = {"periodic_static", "periodic_evolving"};
    const Kinds zhidkov_k = {"zhidkov"}, topo_k = {"topography"};
    const Kinds constant_k = {"periodic_static", "periodic_evolving", "zhidkov"};
    std::vector<Field> t;
    t.push_back({"", "experiment", {},
                 [](RunConfig& c, const std::string& v) { c.experiment = v; },
                 [](const RunConfig& c) { return c.experiment; }});
    t.push_back({"", "seed", {},
                 [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    t.push_back({"", "output_dir", {},
                 [](RunConfig& c, const std::string& v) { c.output_dir = v; },
                 [](const RunConfig& c) { return c.output_dir; }});
    t.push_back({"grid", "num_points", {},
                 [](RunConfig& c, const std::string& v) { c.grid.num_points = to_size(v); },
                 [](const RunConfig& c) { return std::to_string(c.grid.num_points); }});
    t.push_back(BOLAB_DOUBLE("grid", grid.length, "length", Kinds{}));

    t.push_back({"initial", "kind", {},
                 [](RunConfig& c, const std::string& v) { c.initial.kind = v; },
                 [](const RunConfig& c) { return c.initial.kind; }});
    t.push_back(BOLAB_DOUBLE("initial", initial.amplitude, "amplitude", gaussian_k));
    t.push_back(BOLAB_DOUBLE("initial", initial.center, "center", gaussian_k));
    t.push_back(BOLAB_DOUBLE("initial", initial.width, "width", gaussian_k));
    t.push_back({"initial", "k_max", random_k,
                 [](RunConfig& c, const std::string& v) { c.initial.k_max = to_long(v); },
                 [](const RunConfig& c) { return std::to_string(c.initial.k_max); }});
    t.push_back(BOLAB_DOUBLE("initial", initial.decay, "decay", random_k));
    t.push_back(BOLAB_DOUBLE("initial", initial.l2_norm, "l2_norm", random_k));
    t.push_back(BOLAB_DOUBLE("initial", initial.speed, "speed", wave_k));
    t.push_back(BOLAB_DOUBLE("initial", initial.x0, "x0", wave_k));

    t.push_back({"background", "kind", {},
                 [](RunConfig& c, const std::string& v) { c.background.kind = v; },
                 [](const RunConfig& c) { return c.background.kind; }});
    t.push_back(BOLAB_DOUBLE("background", background.c_minus, "c_minus", bore_k));
    t.push_back(BOLAB_DOUBLE("background", background.c_plus, "c_plus", bore_k));
    t.push_back(BOLAB_DOUBLE("background", background.steepness, "steepness", bore_k));
    t.push_back(BOLAB_DOUBLE("background", background.constant, "constant", constant_k));
    t.push_back({"background", "modes", periodic_k,
                 [](RunConfig& c, const std::string& v) { c.background.modes = to_modes(v); },
                 [](const RunConfig& c) { return join_modes(c.background.modes); }});
    t.push_back(BOLAB_DOUBLE("background", background.step, "step", Kinds{"periodic_evolving"}));
    t.push_back(BOLAB_DOUBLE("background", background.s, "s", zhidkov_k));
    t.push_back(BOLAB_DOUBLE("background", background.amplitude, "amplitude", zhidkov_k));
    t.push_back({"background", "k_max", zhidkov_k,
                 [](RunConfig& c, const std::string& v) { c.background.k_max = to_long(v); },
                 [](const RunConfig& c) { return std::to_string(c.background.k_max); }});

    t.push_back({"forcing", "kind", {},
                 [](RunConfig& c, const std::string& v) { c.forcing.kind = v; },
                 [](const RunConfig& c) { return c.forcing.kind; }});
    t.push_back(BOLAB_DOUBLE("forcing", forcing.center, "center", topo_k));
    t.push_back(BOLAB_DOUBLE("forcing", forcing.width, "width", topo_k));
    t.push_back(BOLAB_DOUBLE("forcing", forcing.amplitude, "amplitude", topo_k));

    t.push_back(BOLAB_DOUBLE("solver", solver.dt, "dt", Kinds{}));
    t.push_back(BOLAB_DOUBLE("solver", solver.t_final, "t_final", Kinds{}));
    t.push_back({"solver", "snapshot_stride", {},
                 [](RunConfig& c, const std::string& v) { c.solver.snapshot_stride = to_size(v); },
                 [](const RunConfig& c) { return std::to_string(c.solver.snapshot_stride); }});
    t.push_back({"solver", "dealias", {},
                 [](RunConfig& c, const std::string& v) { c.solver.dealias = to_bool(v); },
                 [](const RunConfig& c) { return std::string(c.solver.dealias ? "true" : "false"); }});
    t.push_back(BOLAB_DOUBLE("solver", solver.cfl, "cfl", Kinds{}));

    t.push_back({"norms", "s", {},
                 [](RunConfig& c, const std::string& v) { c.norms_s = to_doubles(v); },
                 [](const RunConfig& c) { return join_doubles(c.norms_s); }});
    return t;
  }();
  return table;
}

#undef BOLAB_DOUBLE

bool applies(const Field& f, const RunConfig& c) {
  if (f.kinds.empty()) return true;
  const std::string& kind = section_kind(c, f.section);
  return std::find(f.kinds.begin(), f.kinds.end(), kind) != f.kinds.end();
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

std::string qualified(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw ValidationError(field + ": " + why);
}

void require_positive(const std::string& field, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) invalid(field, "must be positive and finite");
}

void require_finite(const std::string& field, double v) {
  if (!std::isfinite(v)) invalid(field, "must be finite");
}

}  // namespace

void validate_config(const RunConfig& c) {
  if (c.experiment != "solve") invalid("experiment", "only 'solve' is configurable by file");
  if (c.output_dir.empty()) invalid("output_dir", "must not be empty");
  if (c.grid.num_points < 16 || (c.grid.num_points & (c.grid.num_points - 1)) != 0) {
    invalid("grid.num_points", "must be a power of two >= 16");
  }
  require_positive("grid.length", c.grid.length);
  for (const auto& [section, kinds] : section_kinds()) {
    const std::string& kind = section_kind(c, section);
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
      invalid(section + ".kind", "unknown kind '" + kind + "'");
    }
  }
  const long kmax_grid = static_cast<long>(c.grid.num_points / 2) - 1;
  const auto& in = c.initial;
  if (in.kind == "gaussian") {
    require_finite("initial.amplitude", in.amplitude);
    require_finite("initial.center", in.center);
    require_positive("initial.width", in.width);
  } else if (in.kind == "random") {
    if (in.k_max < 1 || in.k_max > kmax_grid) invalid("initial.k_max", "must lie in [1, M/2)");
    require_finite("initial.decay", in.decay);
    require_positive("initial.l2_norm", in.l2_norm);
  } else if (in.kind == "travelling_wave") {
    require_positive("initial.speed", in.speed);
    require_finite("initial.x0", in.x0);
  }
  const auto& bg = c.background;
  if (bg.kind == "bore") {
    require_finite("background.c_minus", bg.c_minus);
    require_finite("background.c_plus", bg.c_plus);
    require_positive("background.steepness", bg.steepness);
  } else if (bg.kind == "periodic_static" || bg.kind == "periodic_evolving") {
    require_finite("background.constant", bg.constant);
    if (bg.modes.empty()) invalid("background.modes", "needs at least one k:cos:sin item");
    for (const auto& m : bg.modes) {
      if (m.k < 1 || m.k > kmax_grid) invalid("background.modes", "mode index outside [1, M/2)");
      require_finite("background.modes", m.cos_amp);
      require_finite("background.modes", m.sin_amp);
    }
    if (bg.kind == "periodic_evolving") require_positive("background.step", bg.step);
  } else if (bg.kind == "zhidkov") {
    require_finite("background.constant", bg.constant);
    require_finite("background.s", bg.s);
    require_finite("background.amplitude", bg.amplitude);
    if (bg.k_max < 1 || bg.k_max > kmax_grid) invalid("background.k_max", "must lie in [1, M/2)");
  }
  if (c.forcing.kind == "topography") {
    require_finite("forcing.center", c.forcing.center);
    require_positive("forcing.width", c.forcing.width);
    require_finite("forcing.amplitude", c.forcing.amplitude);
  }
  require_positive("solver.dt", c.solver.dt);
  require_positive("solver.t_final", c.solver.t_final);
  if (c.solver.snapshot_stride < 1) invalid("solver.snapshot_stride", "must be >= 1");
  require_positive("solver.cfl", c.solver.cfl);
  if (c.norms_s.empty()) invalid("norms.s", "needs at least one value");
  for (double s : c.norms_s) require_finite("norms.s", s);
}

RunConfig parse_config(const std::string& text) {
  struct Entry {
    std::string section, key, value;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) -> void {
    throw ValidationError("line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(section_order().begin() + 1, section_order().end(), section) ==
          section_order().end()) {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail("missing key");
    if (!find_field(section, key)) fail("unknown key '" + qualified(section, key) + "'");
    for (const auto& e : entries) {
      if (e.section == section && e.key == key) {
        fail("duplicate key '" + qualified(section, key) + "'");
      }
    }
    entries.push_back({section, key, trim(line.substr(eq + 1)), line_no});
  }

  RunConfig c;
  // Kinds first, so each remaining key can be checked against its section's kind.
  auto apply = [&](const Entry& e) {
    try {
      find_field(e.section, e.key)->set(c, e.value);
    } catch (const ValueError& err) {
      throw ValidationError("line " + std::to_string(e.line) + ": " + qualified(e.section, e.key) +
                            ": " + err.message);
    }
  };
  for (const auto& e : entries) {
    if (e.key == "kind") apply(e);
  }
  for (const auto& e : entries) {
    if (e.key == "kind") continue;
    const Field* f = find_field(e.section, e.key);
    if (!applies(*f, c)) {
      throw ValidationError("line " + std::to_string(e.line) + ": key '" +
                            qualified(e.section, e.key) + "' does not apply to " + e.section +
                            ".kind = " + section_kind(c, e.section));
    }
    apply(e);
  }
  validate_config(c);
  return c;
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  for (const auto& section : section_order()) {
    if (!section.empty()) out += "\n[" + section + "]\n";
    for (const auto& f : fields()) {
      if (f.section == section && applies(f, c)) out += f.key + " = " + f.get(c) + "\n";
    }
  }
  return out;
}

Grid make_grid(const RunConfig& c) { return Grid(c.grid.num_points, c.grid.length); }

SpectralField make_initial(const RunConfig& c) {
  const Grid grid = make_grid(c);
  const auto& in = c.initial;
  if (in.kind == "gaussian") return gaussian(grid, in.amplitude, in.center, in.width);
  if (in.kind == "random") {
    return random_smooth_field(grid, in.k_max, in.decay, in.l2_norm, Rng::derive(c.seed, 0));
  }
  if (in.kind == "travelling_wave") return periodic_travelling_wave(grid, in.speed, in.x0);
  return SpectralField::zero(grid);
}

std::shared_ptr<const BackgroundSpec> make_background(const RunConfig& c) {
  const Grid grid = make_grid(c);
  const auto& bg = c.background;
  if (bg.kind == "bore") {
    return std::make_shared<const BackgroundSpec>(
        BackgroundSpec::bore(grid, {bg.c_minus, bg.c_plus, bg.steepness}));
  }
  if (bg.kind == "periodic_static") {
    return std::make_shared<const BackgroundSpec>(
        BackgroundSpec::periodic_static(grid, bg.constant, bg.modes));
  }
  if (bg.kind == "periodic_evolving") {
    const auto b0 = BackgroundSpec::periodic_static(grid, bg.constant, bg.modes).initial();
    return std::make_shared<const BackgroundSpec>(
        evolve_background(b0, c.solver.t_final, bg.step));
  }
  if (bg.kind == "zhidkov") {
    return std::make_shared<const BackgroundSpec>(BackgroundSpec::zhidkov(
        grid, bg.s, bg.amplitude, bg.constant, bg.k_max, Rng::derive(c.seed, 1)));
  }
  return std::make_shared<const BackgroundSpec>(BackgroundSpec::zero(grid));
}

ForcingSpec make_forcing(const RunConfig& c,
                         const std::shared_ptr<const BackgroundSpec>& background) {
  const Grid grid = make_grid(c);
  if (c.forcing.kind == "derived") return ForcingSpec::derived(background);
  if (c.forcing.kind == "topography") {
    return matsuno_topography(grid, c.forcing.center, c.forcing.width, c.forcing.amplitude);
  }
  return ForcingSpec::zero(grid);
}

SolverConfig make_solver_config(const RunConfig& c) {
  SolverConfig cfg{make_grid(c), c.solver.dt, c.solver.t_final};
  cfg.snapshot_stride = c.solver.snapshot_stride;
  cfg.dealias = c.solver.dealias;
  cfg.cfl = c.solver.cfl;
  cfg.diagnostic_s = c.norms_s;
  return cfg;
}

}  // namespace bolab
