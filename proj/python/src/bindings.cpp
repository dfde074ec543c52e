#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fpattern/commands.hpp"
#include "fpattern/errors.hpp"
#include "fpattern/evolver.hpp"
#include "fpattern/parallel.hpp"
#include "fpattern/verify.hpp"

namespace py = pybind11;
using namespace fpattern;

namespace {

// (ny, nx) copy, x fastest as stored.
py::array_t<double> to_numpy(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  py::array_t<double> out({g.ny(), g.nx()});
  auto v = f.values();
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict grid_dict(const Grid2D& g) {
  py::dict d;
  d["nx"] = g.nx();
  d["ny"] = g.ny();
  d["bounds"] = py::make_tuple(g.xmin(), g.xmax(), g.ymin(), g.ymax());
  d["hx"] = g.hx();
  d["hy"] = g.hy();
  return d;
}

py::dict build_fields(const std::string& text) {
  const RunConfig cfg = parse_config(text);
  const Grid2D grid = make_pattern_grid(cfg.pattern);
  const auto pattern = make_pattern(cfg.pattern, grid);
  const PhysicalParams params = make_params(cfg.physics);
  const LocalField field = reconstruct_pi0(pattern, params, cfg.physics.pi_ambient);
  py::dict d;
  d["grid"] = grid_dict(grid);
  d["phi"] = to_numpy(pattern->phi());
  d["xi"] = to_numpy(pattern->xi());
  d["u_x"] = to_numpy(field.u.x);
  d["u_y"] = to_numpy(field.u.y);
  d["pi0"] = to_numpy(field.pi0);
  d["rho"] = to_numpy(density_from_pi(field.pi0, params));
  d["c0"] = params.c0();
  return d;
}

py::dict residuals(const std::string& text) {
  const RunConfig cfg = parse_config(text);
  const Grid2D grid = make_pattern_grid(cfg.pattern);
  const PhysicalParams params = make_params(cfg.physics);
  ResidualOptions opt;
  opt.exclude_discontinuities = cfg.verify.exclude_discontinuities;
  opt.band_cells = cfg.verify.band_cells;
  const ResidualReport r =
      residual_report(reconstruct_pi0(make_pattern(cfg.pattern, grid), params, cfg.physics.pi_ambient),
                      params, opt);
  py::dict d;
  for (std::size_t k = 0; k < kResidualCount; ++k)
    d[py::str(std::string(kResidualNames[k]))] = py::make_tuple(r.entries[k].linf, r.entries[k].l2);
  d["h"] = r.h;
  d["excluded_count"] = r.excluded_count;
  return d;
}

std::vector<std::string> run(const std::string& command, const std::string& text,
                             const std::filesystem::path& out, unsigned threads) {
  const Command cmd = find_command(command);
  if (!cmd) throw ConfigError("unknown command '" + command + "'");
  RunConfig cfg = parse_config(text);
  cfg.output.directory = out;
  set_thread_count(threads);
  py::gil_scoped_release release;
  return cmd(cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Frozen patterns of rotating barotropic gas flow";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("build_fields", &build_fields, py::arg("config"),
        "Pattern fields for an INI config text, as (ny, nx) arrays.");
  m.def("residuals", &residuals, py::arg("config"), "name -> (Linf, L2) on the pattern grid.");
  m.def("run", &run, py::arg("command"), py::arg("config"), py::arg("out"), py::arg("threads") = 0,
        "Run a CLI command; returns the data files written.");
  m.def("config_hash", &fnv1a64, py::arg("text"));
  m.def(
      "constant_gradient_solution",
      [](std::pair<double, double> v0, std::pair<double, double> g, double gamma, double C, double l,
         double t) {
        const auto s = constant_gradient_solution({}, {v0.first, v0.second}, {g.first, g.second},
                                                  PhysicalParams::make(gamma, C, l), t);
        return py::make_tuple(py::make_tuple(s.X.x, s.X.y), py::make_tuple(s.V.x, s.V.y));
      },
      py::arg("v0"), py::arg("g"), py::arg("gamma"), py::arg("C"), py::arg("l"), py::arg("t"),
      "Centre position and velocity from the origin at time t under a constant bearing gradient.");
}
