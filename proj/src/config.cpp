#include "fpattern/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "fpattern/errors.hpp"

namespace fpattern {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"pattern", {"kind", "r0", "amplitude", "axis", "nx", "ny", "xmin", "xmax", "ymin", "ymax"}},
      {"physics", {"gamma", "C", "l", "pi_ambient"}},
      {"verify", {"ladder", "c_bound", "band_cells", "exclude_discontinuities"}},
      {"bearing",
       {"pi1", "a", "gx", "gy", "bump", "bump_x", "bump_y", "bump_width", "velocity", "mode", "dt",
        "T", "x0", "v0", "transport_dt", "transport_T"}},
      {"evolve", {"bc", "dt", "cfl", "T", "kappa", "snapshot_stride", "a", "gx", "gy", "v0"}},
      {"output", {"directory", "formats"}},
      {"run", {"threads"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

// Accepts a plain number or a multiple of pi ("pi", "2pi", "0.5*pi").
double to_number(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return factor;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + raw + "'");
  }
  if (used != s.size() || !std::isfinite(v)) fail(key, "expected a number, got '" + raw + "'");
  return v * factor;
}

int to_int(const std::string& key, const std::string& raw) {
  const double v = to_number(key, raw);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, "expected an integer, got '" + raw + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  fail(key, "expected true or false, got '" + raw + "'");
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Vec2 to_vec(const std::string& key, const std::string& raw) {
  const auto parts = split_list(raw);
  if (parts.size() != 2) fail(key, "expected two comma-separated numbers, got '" + raw + "'");
  return {to_number(key, parts[0]), to_number(key, parts[1])};
}

template <class Enum>
Enum to_enum(const std::string& key, const std::string& raw,
             const std::vector<std::pair<const char*, Enum>>& options) {
  const std::string s = trim(raw);
  std::string names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names += names.empty() ? name : std::string("|") + name;
  }
  fail(key, "expected one of " + names + ", got '" + raw + "'");
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  const std::string* get(const std::string& section, const std::string& key) const {
    const auto sec = tree_.find(section);
    if (sec == tree_.not_found()) return nullptr;
    const auto it = sec->second.find(key);
    if (it == sec->second.not_found()) return nullptr;
    return &it->second.data();
  }

  void number(const char* section, const char* key, double& out) const {
    if (const auto* v = get(section, key)) out = to_number(name(section, key), *v);
  }
  void integer(const char* section, const char* key, int& out) const {
    if (const auto* v = get(section, key)) out = to_int(name(section, key), *v);
  }
  void vec(const char* section, const char* key, Vec2& out) const {
    if (const auto* v = get(section, key)) out = to_vec(name(section, key), *v);
  }
  void boolean(const char* section, const char* key, bool& out) const {
    if (const auto* v = get(section, key)) out = to_bool(name(section, key), *v);
  }
  // "auto" leaves the sentinel in place.
  void number_or_auto(const char* section, const char* key, double& out, double sentinel) const {
    if (const auto* v = get(section, key)) {
      out = trim(*v) == "auto" ? sentinel : to_number(name(section, key), *v);
    }
  }
  template <class Enum>
  void choice(const char* section, const char* key, Enum& out,
              const std::vector<std::pair<const char*, Enum>>& options) const {
    if (const auto* v = get(section, key)) out = to_enum(name(section, key), *v, options);
  }

  static std::string name(const char* section, const char* key) {
    return std::string(section) + "." + key;
  }

 private:
  const pt::ptree& tree_;
};

void check_known(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = keys.find(section);
    if (it == keys.end()) {
      if (body.empty()) fail(section, "key outside any section");
      fail("[" + section + "]", "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) fail(section + "." + key, "unknown key");
    }
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) fail(key, what);
}

// Runs the owning module's checks; errors gain a section prefix.
template <class F>
void validate_with(const char* section, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(section) + ": " + e.what());
  }
}

void validate(const RunConfig& c) {
  validate_with("pattern", [&] {
    const auto& p = c.pattern;
    if (p.kind == PatternKind::shear)
      require(p.axis == 1 || p.axis == 2, "pattern.axis", "must be 1 or 2");
    make_pattern(p, make_pattern_grid(p));
    for (int n : c.verify.ladder)
      if (n >= 4) make_pattern(p, make_pattern_grid(p, n));
  });
  validate_with("physics", [&] {
    PhysicalParams::make(c.physics.gamma, c.physics.C, c.physics.l);
    require(c.physics.pi_ambient > 0.0, "physics.pi_ambient", "must be positive");
  });

  for (int n : c.verify.ladder) require(n >= 4, "verify.ladder", "entries must be >= 4");
  for (std::size_t k = 1; k < c.verify.ladder.size(); ++k) {
    require(c.verify.ladder[k] == 2 * c.verify.ladder[k - 1] - 1, "verify.ladder",
            "each entry must halve h of the previous one (n -> 2n - 1)");
  }
  require(c.verify.band_cells >= 0.0, "verify.band_cells", "must be non-negative");

  const auto& b = c.bearing;
  require(b.dt > 0.0, "bearing.dt", "must be positive");
  require(b.T >= b.dt, "bearing.T", "must be at least bearing.dt");
  require(b.transport_dt > 0.0, "bearing.transport_dt", "must be positive");
  require(b.transport_T >= 0.0, "bearing.transport_T", "must be non-negative");
  if (b.pi1.kind == Pi1Kind::gaussian)
    require(b.pi1.width > 0.0, "bearing.bump_width", "must be positive");

  const auto& e = c.evolve;
  require(e.T > 0.0, "evolve.T", "must be positive");
  require(e.cfl > 0.0 && e.cfl <= 1.0, "evolve.cfl", "must lie in (0, 1]");
  require(e.kappa >= 0.0, "evolve.kappa", "must be non-negative");
  require(e.snapshot_stride >= 0, "evolve.snapshot_stride", "must be non-negative");
  if (e.bc == BoundaryKind::periodic && (e.pi1_g.x != 0.0 || e.pi1_g.y != 0.0))
    fail("evolve.bc", "a non-zero bearing gradient requires bc = extrapolation");

  for (const auto& f : c.output.formats)
    require(f == "csv" || f == "vtk" || f == "png", "output.formats",
            "unknown format '" + f + "' (csv, vtk, png)");
}

}  // namespace

Grid2D make_pattern_grid(const PatternConfig& c) { return make_grid(c.nx, c.ny, c.bounds); }

Grid2D make_pattern_grid(const PatternConfig& c, int n) { return make_grid(n, n, c.bounds); }

std::shared_ptr<const Pattern> make_pattern(const PatternConfig& c, const Grid2D& grid) {
  switch (c.kind) {
    case PatternKind::rest: return std::make_shared<const Pattern>(Pattern::rest(grid));
    case PatternKind::axisymmetric:
      return std::make_shared<const Pattern>(
          build_axisymmetric(quintic_bump(c.r0, c.amplitude), grid));
    case PatternKind::shear:
      return std::make_shared<const Pattern>(
          build_shear(quintic_bump(c.r0, c.amplitude), c.axis, grid));
    case PatternKind::sector:
      return std::make_shared<const Pattern>(
          build_sector_vortex(quintic_bump(c.r0, c.amplitude), grid));
  }
  throw ConfigError("pattern.kind: unsupported");
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.line() << ": " << e.message();
    throw ConfigError(msg.str());
  }
  check_known(tree);
  const Reader r(tree);

  RunConfig c;
  c.text = text;
  c.hash = fnv1a64(text);

  auto& p = c.pattern;
  r.choice("pattern", "kind", p.kind,
           {{"rest", PatternKind::rest},
            {"axisymmetric", PatternKind::axisymmetric},
            {"shear", PatternKind::shear},
            {"sector", PatternKind::sector}});
  r.number("pattern", "r0", p.r0);
  r.number("pattern", "amplitude", p.amplitude);
  r.integer("pattern", "axis", p.axis);
  r.integer("pattern", "nx", p.nx);
  p.ny = p.nx;
  r.integer("pattern", "ny", p.ny);
  r.number("pattern", "xmin", p.bounds.xmin);
  r.number("pattern", "xmax", p.bounds.xmax);
  r.number("pattern", "ymin", p.bounds.ymin);
  r.number("pattern", "ymax", p.bounds.ymax);

  r.number("physics", "gamma", c.physics.gamma);
  r.number("physics", "C", c.physics.C);
  r.number("physics", "l", c.physics.l);
  r.number("physics", "pi_ambient", c.physics.pi_ambient);

  if (const auto* v = r.get("verify", "ladder")) {
    for (const auto& item : split_list(*v)) c.verify.ladder.push_back(to_int("verify.ladder", item));
  }
  r.number_or_auto("verify", "c_bound", c.verify.c_bound, -1.0);
  if (r.get("verify", "c_bound") && trim(*r.get("verify", "c_bound")) != "auto")
    require(c.verify.c_bound >= 0.0, "verify.c_bound", "must be auto or non-negative");
  r.number("verify", "band_cells", c.verify.band_cells);
  r.boolean("verify", "exclude_discontinuities", c.verify.exclude_discontinuities);

  auto& b = c.bearing;
  r.choice("bearing", "pi1", b.pi1.kind,
           {{"constant", Pi1Kind::constant},
            {"linear", Pi1Kind::linear},
            {"gaussian", Pi1Kind::gaussian}});
  r.number("bearing", "a", b.pi1.a);
  r.number("bearing", "gx", b.pi1.g.x);
  r.number("bearing", "gy", b.pi1.g.y);
  if (b.pi1.kind == Pi1Kind::constant) b.pi1.g = {};
  r.number("bearing", "bump", b.pi1.bump);
  r.number("bearing", "bump_x", b.pi1.centre.x);
  r.number("bearing", "bump_y", b.pi1.centre.y);
  r.number("bearing", "bump_width", b.pi1.width);
  r.choice("bearing", "velocity", b.velocity,
           {{"pattern", VelocityKind::pattern}, {"solid_body", VelocityKind::solid_body}});
  r.choice("bearing", "mode", b.mode,
           {{"constant_gradient", TrajectoryMode::constant_gradient},
            {"coupled", TrajectoryMode::coupled}});
  r.number("bearing", "dt", b.dt);
  r.number("bearing", "T", b.T);
  r.vec("bearing", "x0", b.x0);
  r.vec("bearing", "v0", b.v0);
  r.number("bearing", "transport_dt", b.transport_dt);
  r.number("bearing", "transport_T", b.transport_T);

  auto& e = c.evolve;
  r.choice("evolve", "bc", e.bc,
           {{"periodic", BoundaryKind::periodic}, {"extrapolation", BoundaryKind::extrapolation}});
  r.number_or_auto("evolve", "dt", e.dt, 0.0);
  if (r.get("evolve", "dt") && trim(*r.get("evolve", "dt")) != "auto")
    require(e.dt > 0.0, "evolve.dt", "must be auto or positive");
  r.number("evolve", "cfl", e.cfl);
  r.number("evolve", "T", e.T);
  r.number("evolve", "kappa", e.kappa);
  r.integer("evolve", "snapshot_stride", e.snapshot_stride);
  r.number("evolve", "a", e.pi1_a);
  r.number("evolve", "gx", e.pi1_g.x);
  r.number("evolve", "gy", e.pi1_g.y);
  r.vec("evolve", "v0", e.v0);

  if (const auto* v = r.get("output", "directory")) c.output.directory = trim(*v);
  if (const auto* v = r.get("output", "formats")) {
    c.output.formats.clear();
    for (const auto& f : split_list(*v)) c.output.formats.insert(f);
  }
  if (const auto* v = r.get("run", "threads")) {
    const int n = to_int("run.threads", *v);
    require(n >= 0, "run.threads", "must be non-negative");
    c.output.threads = static_cast<unsigned>(n);
  }

  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace fpattern
