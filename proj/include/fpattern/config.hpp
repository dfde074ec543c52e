#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "fpattern/evolver.hpp"
#include "fpattern/fields.hpp"
#include "fpattern/pattern.hpp"
#include "fpattern/physics.hpp"

namespace fpattern {

struct PatternConfig {
  PatternKind kind = PatternKind::axisymmetric;
  double r0 = 1.0;
  double amplitude = 1.0;
  int axis = 1;
  int nx = 129;
  int ny = 129;
  Bounds bounds{-1.25, 1.25, -1.25, 1.25};
};

struct PhysicsConfig {
  double gamma = 1.5;
  double C = 1.0;
  double l = 1.0;
  double pi_ambient = 5.0;
};

struct VerifyConfig {
  /// Node counts per side; empty means the single pattern grid.
  std::vector<int> ladder;
  /// Negative selects the analytic bound of the pattern.
  double c_bound = -1.0;
  double band_cells = 3.0;
  bool exclude_discontinuities = true;
};

enum class Pi1Kind { constant, linear, gaussian };
enum class VelocityKind { pattern, solid_body };
enum class TrajectoryMode { constant_gradient, coupled };

/// pi1 = a + g.x + bump * exp(-|x - centre|^2 / width^2) (bump only for gaussian).
struct Pi1Config {
  Pi1Kind kind = Pi1Kind::linear;
  double a = 1.0;
  Vec2 g{0.0, 0.01};
  double bump = 0.1;
  Vec2 centre{0.3, 0.0};
  double width = 0.3;
};

struct BearingConfig {
  Pi1Config pi1;
  VelocityKind velocity = VelocityKind::pattern;
  TrajectoryMode mode = TrajectoryMode::constant_gradient;
  double dt = 1e-3;
  double T = 4.0 * 3.14159265358979323846;
  Vec2 x0{};
  Vec2 v0{};
  double transport_dt = 0.01;
  double transport_T = 1.0;
};

struct EvolveConfig {
  BoundaryKind bc = BoundaryKind::periodic;
  /// Non-positive selects cfl * max_stable_dt of the initial state.
  double dt = 0.0;
  double cfl = 0.75;
  double T = 2.0 * 3.14159265358979323846;
  double kappa = 0.05;
  int snapshot_stride = 0;
  double pi1_a = 0.0;
  Vec2 pi1_g{};
  Vec2 v0{};
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  std::set<std::string> formats{"csv", "vtk"};
  unsigned threads = 0;
};

struct RunConfig {
  PatternConfig pattern;
  PhysicsConfig physics;
  VerifyConfig verify;
  BearingConfig bearing;
  EvolveConfig evolve;
  OutputConfig output;
  std::string text;        ///< raw config text
  std::uint64_t hash = 0;  ///< FNV-1a of text

  bool wants(const std::string& format) const { return output.formats.count(format) > 0; }
};

/// Flat INI: [section] headers, key = value, '#' or ';' comment lines.
/// Parses and validates; every value is checked against the preconditions
/// of the module that consumes it. Throws ConfigError naming section.key.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Throws IoError if the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);

Grid2D make_pattern_grid(const PatternConfig& c);
/// Same bounds, n x n nodes.
Grid2D make_pattern_grid(const PatternConfig& c, int n);
std::shared_ptr<const Pattern> make_pattern(const PatternConfig& c, const Grid2D& grid);

}  // namespace fpattern
