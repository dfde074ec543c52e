#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
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
  const fs::path d = fs::temp_directory_path() / ("fpattern_io_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("format_double round-trips with 17 significant digits") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.5e-20) == "-2.4999999999999999e-20");
  for (double v : {0.1, 1.0 / 3.0, 2.0 / 7.0, 6.02214076e23, -1e-300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("field CSV is x-fastest with a header") {
  const Grid2D g = make_grid(4, 4, {0.0, 3.0, 10.0, 13.0});
  const ScalarField2D f = ScalarField2D::from_function(g, [](double x, double y) { return x + 100 * y; });
  VectorField2D v(g);
  v.set(1, 0, {7.0, -7.0});
  const std::string csv = fields_csv({{"f", &f}}, {{"u", &v}});
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,f,u_x,u_y");
  std::getline(in, line);
  CHECK(line == "0,10,1000,0,0");
  std::getline(in, line);
  CHECK(line == "1,10,1001,7,-7");
  int rows = 2;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 16);
}

TEST_CASE("VTK legacy structured points header") {
  const Grid2D g = make_grid(5, 4, {-1.0, 1.0, 0.0, 0.75});
  const ScalarField2D f(g, 2.0);
  const VectorField2D v(g);
  const std::string vtk = fields_vtk({{"pi0", &f}}, {{"u", &v}}, "test");
  CHECK(vtk.rfind("# vtk DataFile Version 3.0\ntest\nASCII\nDATASET STRUCTURED_POINTS\n", 0) == 0);
  CHECK(vtk.find("DIMENSIONS 5 4 1\n") != std::string::npos);
  CHECK(vtk.find("ORIGIN -1 0 0\n") != std::string::npos);
  CHECK(vtk.find("SPACING 0.5 0.25 1\n") != std::string::npos);
  CHECK(vtk.find("POINT_DATA 20\n") != std::string::npos);
  CHECK(vtk.find("SCALARS pi0 double 1\nLOOKUP_TABLE default\n2\n") != std::string::npos);
  CHECK(vtk.find("VECTORS u double\n0 0 0\n") != std::string::npos);
}

TEST_CASE("field writers reject mixed grids") {
  const ScalarField2D a(make_grid(4, 4, {0, 1, 0, 1}));
  const ScalarField2D b(make_grid(5, 4, {0, 1, 0, 1}));
  CHECK_THROWS_AS(fields_csv({{"a", &a}, {"b", &b}}), ConfigError);
}

TEST_CASE("CsvTable rows must match the header") {
  CsvTable t({"a", "b"});
  t.add_row(std::vector<double>{1.0, 0.5});
  t.add_row(std::vector<std::string>{"x", "y"});
  CHECK(t.str() == "a,b\n1,0.5\nx,y\n");
  CHECK(t.rows() == 2);
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("OutputSink writes files and one manifest line each") {
  const fs::path dir = fresh_dir("sink");
  OutputSink sink(dir, 0x0123456789abcdefull, "build");
  sink.write_text("a.csv", "x\n1\n");
  sink.write_text("b.csv", "y\n");
  sink.finish();
  CHECK(slurp(dir / "a.csv") == "x\n1\n");
  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("build a.csv 4 fnv1a64=0123456789abcdef ") == 0);
  CHECK(manifest.find("\nbuild b.csv 2 fnv1a64=0123456789abcdef ") != std::string::npos);
  CHECK(sink.files() == std::vector<std::string>{"a.csv", "b.csv"});
  fs::remove_all(dir);
}

TEST_CASE("unwritable output directory is an I/O error") {
  const fs::path dir = fresh_dir("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  CHECK_THROWS_AS(OutputSink(dir / "file" / "sub", 0, "build"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("heatmap PNG") {
  const fs::path dir = fresh_dir("png");
  fs::create_directories(dir);
  const Grid2D g = make_grid(33, 33, {-1, 1, -1, 1});
  const ScalarField2D f = ScalarField2D::from_function(g, [](double x, double y) { return x * y; });
  VectorField2D u(g);
  for (int j = 0; j < 33; ++j)
    for (int i = 0; i < 33; ++i) u.set(i, j, apply_L(g.node(i, j)));
  HeatmapOptions opt;
  opt.arrows = &u;
  opt.arrow_stride = 4;
  opt.lines = {{{0, 0}, {0.5, 0.5}}};
  if (png_supported()) {
    write_heatmap_png(dir / "f.png", f, opt);
    const std::string bytes = slurp(dir / "f.png");
    REQUIRE(bytes.size() > 8);
    CHECK(bytes.substr(1, 3) == "PNG");
  } else {
    CHECK_THROWS_AS(write_heatmap_png(dir / "f.png", f, opt), IoError);
  }
  fs::remove_all(dir);
}
