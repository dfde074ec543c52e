#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fpattern/commands.hpp"
#include "fpattern/errors.hpp"
#include "fpattern/io.hpp"

using namespace fpattern;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fpattern_cmd_" + name);
  fs::remove_all(d);
  return d;
}

RunConfig config(const std::string& text, const fs::path& out) {
  RunConfig c = parse_config(text);
  c.output.directory = out;
  return c;
}

// quantity,value tables.
std::map<std::string, double> summary(const fs::path& p) {
  std::map<std::string, double> out;
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    out[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return out;
}

std::vector<std::vector<std::string>> rows(const fs::path& p) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

const char* kVortex = R"(
[pattern]
kind = axisymmetric
nx = 65
xmin = -1.25
xmax = 1.25
ymin = -1.25
ymax = 1.25
[physics]
pi_ambient = 5
[output]
formats = csv
)";

const char* kSector = R"(
[pattern]
kind = sector
nx = 257
xmin = -1.25
xmax = 1.25
ymin = -1.25
ymax = 1.25
[output]
formats = csv, png
)";

const char* kTrajectory = R"(
[physics]
gamma = 2
C = 2.25
l = 1
[bearing]
pi1 = linear
gx = 0
gy = 0.01
dt = 0.001
T = 4pi
x0 = 0, 0
v0 = 0.02, 0
)";

const char* kEvolve = R"(
[pattern]
nx = 33
xmin = -2
xmax = 2
ymin = -2
ymax = 2
amplitude = 0.25
[evolve]
T = 0.5
snapshot_stride = 10
[output]
formats = csv, vtk
)";

}  // namespace

TEST_CASE("build writes five field files plus quiver and summary") {
  const fs::path dir = fresh_dir("build");
  const auto files = cmd_build(config(kVortex, dir));
  for (const char* f : {"phi.csv", "xi.csv", "u.csv", "pi0.csv", "rho.csv"}) {
    CHECK(std::find(files.begin(), files.end(), f) != files.end());
    CHECK(fs::exists(dir / f));
  }
  CHECK(fs::exists(dir / "quiver.csv"));
  CHECK(fs::exists(dir / "manifest.txt"));
  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(std::count(manifest.begin(), manifest.end(), '\n') == static_cast<long>(files.size()));
  CHECK(manifest.find(hex64(fnv1a64(kVortex))) != std::string::npos);
  CHECK(rows(dir / "u.csv")[0] == std::vector<std::string>{"x", "y", "u_x", "u_y"});
  CHECK(rows(dir / "pi0.csv").size() == 65u * 65u + 1u);
  const auto s = summary(dir / "summary.csv");
  CHECK(s.at("pi0_min") < s.at("pi0_max"));
  CHECK(s.at("circulation") > 0.0);
  fs::remove_all(dir);
}

TEST_CASE("amplitude 0 is rejected before anything is written") {
  try {
    parse_config("[pattern]\namplitude = 0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("amplitude") != std::string::npos);
  }
}

TEST_CASE("sector build: anticlockwise circulation and a PNG") {
  const fs::path dir = fresh_dir("sector");
  RunConfig c = config(kSector, dir);
  if (!png_supported()) c.output.formats.erase("png");
  cmd_build(c);
  CHECK(summary(dir / "summary.csv").at("circulation") > 0.0);
  if (png_supported()) CHECK(fs::file_size(dir / "pi0.png") > 1000);
  fs::remove_all(dir);
}

TEST_CASE("verify on the rest state gives an all-zero report") {
  const fs::path dir = fresh_dir("verify_rest");
  cmd_verify(config("[pattern]\nkind = rest\nnx = 33\n", dir));
  const auto r = rows(dir / "report.csv");
  CHECK(r[0] == std::vector<std::string>{"grid", "name", "Linf", "L2", "h", "excluded_count"});
  REQUIRE(r.size() == 8);
  for (std::size_t k = 1; k < r.size(); ++k) {
    CHECK(r[k][2] == "0");
    CHECK(r[k][3] == "0");
  }
  fs::remove_all(dir);
}

TEST_CASE("verify on the sector records the excluded band") {
  const fs::path dir = fresh_dir("verify_sector");
  RunConfig c = config(kSector, dir);
  c.pattern.nx = c.pattern.ny = 129;
  cmd_verify(c);
  const auto r = rows(dir / "report.csv");
  const long ring = 4 * (129 - 1);
  CHECK(std::stol(r[1][5]) > ring);
  fs::remove_all(dir);
}

TEST_CASE("verify ladder writes an order table") {
  const fs::path dir = fresh_dir("verify_ladder");
  RunConfig c = config(kVortex, dir);
  c.verify.ladder = {33, 65};
  cmd_verify(c);
  const auto o = rows(dir / "orders.csv");
  REQUIRE(o.size() == 8);
  CHECK(o[1][0] == "eikonal");
  CHECK(std::stod(o[1][3]) > 1.5);
  const auto st = rows(dir / "stability.csv");
  CHECK(st.size() == 3);
  CHECK(st[1][3] == "1");
  fs::remove_all(dir);
}

TEST_CASE("constant-g trajectory matches the inertial oscillation") {
  const fs::path dir = fresh_dir("trajectory");
  const RunConfig c = config(kTrajectory, dir);
  cmd_trajectory(c);
  const auto r = rows(dir / "trajectory.csv");
  CHECK(r[0] == std::vector<std::string>{"t", "X1", "X2", "V1", "V2", "err_X", "err_V"});
  const auto& last = r.back();
  const double T = std::stod(last[0]);
  CHECK(T == doctest::Approx(4.0 * std::acos(-1.0)).epsilon(1e-14));
  const PhysicalParams p = make_params(c.physics);
  CHECK(p.c0() == doctest::Approx(3.0).epsilon(1e-15));
  const CenterState ex = constant_gradient_solution({}, {0.02, 0.0}, {0.0, 0.01}, p, T);
  CHECK(std::abs(std::stod(last[3]) - ex.V.x) <= 1e-8);
  CHECK(std::abs(std::stod(last[4]) - ex.V.y) <= 1e-8);
  CHECK(std::stod(last[6]) <= 1e-8);
  // The oscillation centre is the drift (-0.03, 0).
  const Vec2 vs = geostrophic_drift({0.0, 0.01}, p);
  CHECK(vs.x == doctest::Approx(-0.03).epsilon(1e-14));
  CHECK(vs.y == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("coupled trajectory reads g from the transported field") {
  const fs::path dir = fresh_dir("coupled");
  RunConfig c = config(kVortex, dir);
  c.bearing.mode = TrajectoryMode::coupled;
  c.bearing.pi1 = {Pi1Kind::linear, 0.0, {0.0, 0.01}};
  c.bearing.dt = 0.01;
  c.bearing.T = 0.5;
  c.bearing.transport_dt = 0.05;
  cmd_trajectory(c);
  const auto r = rows(dir / "trajectory.csv");
  CHECK(r.size() == 52);
  // A linear pi1 starts with g equal to its gradient.
  CHECK(std::stod(r[1][6]) == doctest::Approx(0.01).epsilon(1e-9));
  fs::remove_all(dir);
}

TEST_CASE("solid-body transport compares with the exact rotation") {
  double previous = 0.0;
  for (int n : {65, 129}) {
    const fs::path dir = fresh_dir("solid_" + std::to_string(n));
    RunConfig c = config(R"(
[pattern]
kind = rest
xmin = -1
xmax = 1
ymin = -1
ymax = 1
[bearing]
pi1 = gaussian
a = 1
gx = 0
gy = 0
bump = 1
bump_x = 0.4
bump_y = 0
bump_width = 0.3
velocity = solid_body
transport_dt = 0.05
transport_T = 1.5
)",
                         dir);
    c.pattern.nx = c.pattern.ny = n;
    cmd_transport(c);
    CHECK(rows(dir / "pi1.csv")[0] ==
          std::vector<std::string>{"x", "y", "pi1_initial", "pi1_final", "pi1_exact", "error"});
    const double err = summary(dir / "transport_summary.csv").at("max_interior_error");
    if (previous > 0.0) CHECK(err < 0.5 * previous);
    previous = err;
    fs::remove_all(dir);
  }
}

TEST_CASE("pattern transport leaves pi1 alone outside the support") {
  const fs::path dir = fresh_dir("transport");
  RunConfig c = config(kVortex, dir);
  c.bearing.transport_dt = 0.02;
  c.bearing.transport_T = 0.2;
  cmd_transport(c);
  const auto s = summary(dir / "transport_summary.csv");
  CHECK(s.at("max_change_outside_stencil_support") == 0.0);
  CHECK(s.at("max_change_outside_support") > 0.0);
  CHECK(s.at("max_Q") <= s.at("Q_bound"));
  fs::remove_all(dir);
}

TEST_CASE("evolve writes ledger, correlation and snapshots") {
  const fs::path dir = fresh_dir("evolve");
  cmd_evolve(config(kEvolve, dir));
  const auto ledger = rows(dir / "ledger.csv");
  CHECK(ledger[0] == std::vector<std::string>{"t", "mass", "momx", "momy", "energy"});
  CHECK(std::stod(ledger.back()[0]) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fs::exists(dir / "snapshot_000000.vtk"));
  CHECK(fs::exists(dir / "snapshot_000010.csv"));
  const auto s = summary(dir / "evolve_summary.csv");
  CHECK(s.at("max_relative_mass_drift") < 1e-12);
  CHECK(s.at("correlation") > 0.9);
  fs::remove_all(dir);
}

TEST_CASE("identical configs produce bit-identical data files") {
  const std::vector<std::pair<Command, std::string>> runs = {
      {&cmd_build, kVortex},
      {&cmd_verify, kVortex},
      {&cmd_transport, kVortex},
      {&cmd_trajectory, kTrajectory},
      {&cmd_evolve, kEvolve},
  };
  int k = 0;
  for (const auto& [cmd, text] : runs) {
    const fs::path a = fresh_dir("det_a" + std::to_string(k));
    const fs::path b = fresh_dir("det_b" + std::to_string(k));
    const auto files = cmd(config(text, a));
    cmd(config(text, b));
    REQUIRE_FALSE(files.empty());
    for (const auto& f : files) {
      INFO(f);
      CHECK(slurp(a / f) == slurp(b / f));
    }
    fs::remove_all(a);
    fs::remove_all(b);
    ++k;
  }
}

TEST_CASE("numerical failures surface as NumericalError") {
  const fs::path dir = fresh_dir("numerical");
  // Ambient pi too low for the pressure well: pi0 turns negative.
  CHECK_THROWS_AS(cmd_build(config("[pattern]\nnx = 33\n[physics]\npi_ambient = 0.1\n", dir)),
                  NumericalError);
  fs::remove_all(dir);
}

TEST_CASE("find_command") {
  CHECK(find_command("build") == &cmd_build);
  CHECK(find_command("evolve") == &cmd_evolve);
  CHECK(find_command("plot") == nullptr);
}
