#include "fpattern/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "fpattern/errors.hpp"
#include "fpattern/evolver.hpp"
#include "fpattern/io.hpp"
#include "fpattern/ops.hpp"
#include "fpattern/verify.hpp"

namespace fpattern {

PhysicalParams make_params(const PhysicsConfig& c) {
  return PhysicalParams::make(c.gamma, c.C, c.l);
}

ScalarField2D make_pi1(const Pi1Config& c, const Grid2D& grid) {
  return ScalarField2D::from_function(grid, [&](double x, double y) {
    double v = c.a + c.g.x * x + c.g.y * y;
    if (c.kind == Pi1Kind::gaussian) {
      const double dx = x - c.centre.x;
      const double dy = y - c.centre.y;
      v += c.bump * std::exp(-(dx * dx + dy * dy) / (c.width * c.width));
    }
    return v;
  });
}

Vec2 pi1_gradient_at_origin(const Pi1Config& c) {
  Vec2 g = c.g;
  if (c.kind == Pi1Kind::gaussian) {
    const double w2 = c.width * c.width;
    const double e = std::exp(-dot(c.centre, c.centre) / w2);
    g = g + (2.0 * c.bump * e / w2) * c.centre;
  }
  return g;
}

VectorField2D solid_body_velocity(const Grid2D& grid) {
  VectorField2D u(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) u.set(i, j, apply_L(grid.node(i, j)));
  return u;
}

namespace {

std::string bool_cell(bool v) { return v ? "1" : "0"; }

std::string int_cell(long v) { return std::to_string(v); }

// Writes each field in every configured field format.
void write_fields(OutputSink& sink, const RunConfig& cfg, const std::string& stem,
                  const std::vector<NamedScalar>& scalars,
                  const std::vector<NamedVector>& vectors = {}) {
  if (cfg.wants("csv")) sink.write_text(stem + ".csv", fields_csv(scalars, vectors));
  if (cfg.wants("vtk")) sink.write_text(stem + ".vtk", fields_vtk(scalars, vectors, stem));
}

double mid_radius(const RunConfig& cfg) {
  return cfg.pattern.kind == PatternKind::rest ? 0.5 : 0.5 * cfg.pattern.r0;
}

// The two rays bounding the sector wedge, from the origin to the unit circle.
std::vector<std::pair<Vec2, Vec2>> sector_rays() {
  const double s = std::sqrt(3.0) / 2.0;
  return {{{0.0, 0.0}, {0.5, s}}, {{0.0, 0.0}, {0.5, -s}}};
}

}  // namespace

std::vector<std::string> cmd_build(const RunConfig& cfg) {
  const Grid2D grid = make_pattern_grid(cfg.pattern);
  const auto pattern = make_pattern(cfg.pattern, grid);
  const PhysicalParams params = make_params(cfg.physics);
  const LocalField field = reconstruct_pi0(pattern, params, cfg.physics.pi_ambient);
  const ScalarField2D rho = density_from_pi(field.pi0, params);

  OutputSink sink(cfg.output.directory, cfg.hash, "build");
  write_fields(sink, cfg, "phi", {{"phi", &pattern->phi()}});
  write_fields(sink, cfg, "xi", {{"xi", &pattern->xi()}});
  write_fields(sink, cfg, "u", {}, {{"u", &field.u}});
  write_fields(sink, cfg, "pi0", {{"pi0", &field.pi0}});
  write_fields(sink, cfg, "rho", {{"rho", &rho}});

  const int stride = std::max(1, (std::max(grid.nx(), grid.ny()) - 1) / 32);
  CsvTable quiver({"x", "y", "u_x", "u_y"});
  for (int j = 0; j < grid.ny(); j += stride)
    for (int i = 0; i < grid.nx(); i += stride) {
      const Vec2 p = grid.node(i, j);
      const Vec2 v = field.u.at(i, j);
      quiver.add_row(std::vector<double>{p.x, p.y, v.x, v.y});
    }
  sink.write_text("quiver.csv", quiver.str());

  const double radius = mid_radius(cfg);
  CsvTable summary({"quantity", "value"});
  summary.add_row(std::vector<std::string>{"c0", format_double(params.c0())});
  summary.add_row(std::vector<std::string>{"pi0_min", format_double(field.pi0.min())});
  summary.add_row(std::vector<std::string>{"pi0_max", format_double(field.pi0.max())});
  summary.add_row(std::vector<std::string>{"circulation_radius", format_double(radius)});
  summary.add_row(
      std::vector<std::string>{"circulation", format_double(circulation(field.u, {}, radius))});
  sink.write_text("summary.csv", summary.str());

  if (cfg.wants("png")) {
    HeatmapOptions opt;
    opt.arrows = &field.u;
    opt.arrow_stride = std::max(1, (grid.nx() - 1) / 24);
    if (cfg.pattern.kind == PatternKind::sector) opt.lines = sector_rays();
    write_heatmap_png(sink.path("pi0.png"), field.pi0, opt);
    sink.record("pi0.png");
  }
  sink.finish();
  return sink.files();
}

std::vector<std::string> cmd_verify(const RunConfig& cfg) {
  std::vector<int> ladder = cfg.verify.ladder;
  if (ladder.empty()) ladder.push_back(cfg.pattern.nx);
  const PhysicalParams params = make_params(cfg.physics);
  ResidualOptions ropt;
  ropt.exclude_discontinuities = cfg.verify.exclude_discontinuities;
  ropt.band_cells = cfg.verify.band_cells;

  CsvTable report({"grid", "name", "Linf", "L2", "h", "excluded_count"});
  CsvTable stability({"grid", "C_bound", "min_value", "pass", "i", "j", "di", "dj"});
  std::vector<ResidualReport> reports;
  for (int n : ladder) {
    const Grid2D grid = cfg.verify.ladder.empty() ? make_pattern_grid(cfg.pattern)
                                                  : make_pattern_grid(cfg.pattern, n);
    const auto pattern = make_pattern(cfg.pattern, grid);
    const LocalField field = reconstruct_pi0(pattern, params, cfg.physics.pi_ambient);
    ResidualReport r = residual_report(field, params, ropt);
    for (std::size_t k = 0; k < kResidualCount; ++k) {
      report.add_row(std::vector<std::string>{
          int_cell(n), std::string(kResidualNames[k]), format_double(r.entries[k].linf),
          format_double(r.entries[k].l2), format_double(r.h), int_cell(r.excluded_count)});
    }
    const double c_bound =
        cfg.verify.c_bound >= 0.0 ? cfg.verify.c_bound : analytic_stability_bound(*pattern);
    const StabilityResult s = check_stability_class(pattern->phi(), c_bound, r.excluded);
    stability.add_row(std::vector<std::string>{
        int_cell(n), format_double(c_bound), format_double(s.min_value), bool_cell(s.pass),
        int_cell(s.i), int_cell(s.j), int_cell(s.di), int_cell(s.dj)});
    reports.push_back(std::move(r));
  }

  CsvTable orders({"name", "coarse", "fine", "order_Linf", "order_L2"});
  for (std::size_t m = 1; m < reports.size(); ++m) {
    for (std::size_t k = 0; k < kResidualCount; ++k) {
      const Norms& a = reports[m - 1].entries[k];
      const Norms& b = reports[m].entries[k];
      orders.add_row(std::vector<std::string>{
          std::string(kResidualNames[k]), int_cell(ladder[m - 1]), int_cell(ladder[m]),
          format_double(observed_order(a.linf, b.linf)), format_double(observed_order(a.l2, b.l2))});
    }
  }

  OutputSink sink(cfg.output.directory, cfg.hash, "verify");
  sink.write_text("report.csv", report.str());
  sink.write_text("stability.csv", stability.str());
  if (reports.size() > 1) sink.write_text("orders.csv", orders.str());
  sink.finish();
  return sink.files();
}

std::vector<std::string> cmd_transport(const RunConfig& cfg) {
  const Grid2D grid = make_pattern_grid(cfg.pattern);
  const PhysicalParams params = make_params(cfg.physics);
  const auto& b = cfg.bearing;
  const bool solid = b.velocity == VelocityKind::solid_body;
  const auto pattern = make_pattern(cfg.pattern, grid);
  const VectorField2D u = solid ? solid_body_velocity(grid) : perp_gradient(pattern->phi());

  const auto steps = static_cast<int>(std::llround(b.transport_T / b.transport_dt));
  BearingState s0;
  s0.pi1 = make_pi1(b.pi1, grid);
  const BearingState s1 = advect_pi1(s0, u, b.transport_dt, steps);
  const VectorField2D q = discrepancy_Q(s1.pi1, params);

  OutputSink sink(cfg.output.directory, cfg.hash, "transport");
  std::vector<NamedScalar> fields{{"pi1_initial", &s0.pi1}, {"pi1_final", &s1.pi1}};
  ScalarField2D exact;
  ScalarField2D error;
  double max_error = 0.0;
  if (solid) {
    // Exact characteristics: pi1(t, x) = pi1(0, rot(-t) x).
    const double t = steps * b.transport_dt;
    const double c = std::cos(t);
    const double sn = std::sin(t);
    Pi1Config pc = b.pi1;
    exact = ScalarField2D::from_function(grid, [&](double x, double y) {
      const double x0 = c * x + sn * y;
      const double y0 = -sn * x + c * y;
      double v = pc.a + pc.g.x * x0 + pc.g.y * y0;
      if (pc.kind == Pi1Kind::gaussian) {
        const double dx = x0 - pc.centre.x;
        const double dy = y0 - pc.centre.y;
        v += pc.bump * std::exp(-(dx * dx + dy * dy) / (pc.width * pc.width));
      }
      return v;
    });
    error = ScalarField2D(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) error[k] = s1.pi1[k] - exact[k];
    max_error = interior_norms(error).linf;
    fields.push_back({"pi1_exact", &exact});
    fields.push_back({"error", &error});
  }
  write_fields(sink, cfg, "pi1", fields);
  write_fields(sink, cfg, "Q", {}, {{"Q", &q}});

  // Closed-form support, and its dilation by the gradient stencil.
  double outside = 0.0;
  double outside_stencil = 0.0;
  if (!solid) {
    auto out_at = [&](int i, int j) {
      i = std::clamp(i, 0, grid.nx() - 1);
      j = std::clamp(j, 0, grid.ny() - 1);
      return pattern->outside_support(grid.node(i, j));
    };
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        if (!out_at(i, j)) continue;
        const double d = std::abs(s1.pi1(i, j) - s0.pi1(i, j));
        outside = std::max(outside, d);
        if (out_at(i - 1, j) && out_at(i + 1, j) && out_at(i, j - 1) && out_at(i, j + 1))
          outside_stencil = std::max(outside_stencil, d);
      }
  }
  double qmax = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) qmax = std::max(qmax, std::hypot(q.x[k], q.y[k]));

  const double g0 = sup_grad_norm(s0.pi1);
  const double g1 = sup_grad_norm(s1.pi1);
  CsvTable summary({"quantity", "value"});
  auto row = [&](const char* name, double v) {
    summary.add_row(std::vector<std::string>{name, format_double(v)});
  };
  row("t", steps * b.transport_dt);
  row("steps", steps);
  row("sup_grad_initial", g0);
  row("sup_grad_final", g1);
  row("sup_grad_ratio", g0 > 0.0 ? g1 / g0 : 1.0);
  row("pi1_min_initial", s0.pi1.min());
  row("pi1_max_initial", s0.pi1.max());
  row("pi1_min_final", s1.pi1.min());
  row("pi1_max_final", s1.pi1.max());
  row("max_Q", qmax);
  row("Q_bound", 2.0 * params.c0() * g1);
  if (solid) row("max_interior_error", max_error);
  else {
    row("max_change_outside_support", outside);
    row("max_change_outside_stencil_support", outside_stencil);
  }
  sink.write_text("transport_summary.csv", summary.str());
  sink.finish();
  return sink.files();
}

std::vector<std::string> cmd_trajectory(const RunConfig& cfg) {
  const PhysicalParams params = make_params(cfg.physics);
  const auto& b = cfg.bearing;
  OutputSink sink(cfg.output.directory, cfg.hash, "trajectory");

  if (b.mode == TrajectoryMode::constant_gradient) {
    const Vec2 g = pi1_gradient_at_origin(b.pi1);
    const Trajectory tr =
        integrate_center(b.x0, b.v0, [g](double) { return g; }, params, b.dt, b.T);
    CsvTable table({"t", "X1", "X2", "V1", "V2", "err_X", "err_V"});
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      const CenterState ex = constant_gradient_solution(b.x0, b.v0, g, params, tr.t[k]);
      table.add_row(std::vector<double>{tr.t[k], tr.X[k].x, tr.X[k].y, tr.V[k].x, tr.V[k].y,
                                        norm(tr.X[k] - ex.X), norm(tr.V[k] - ex.V)});
    }
    sink.write_text("trajectory.csv", table.str());
    sink.finish();
    return sink.files();
  }

  // Coupled: g(t) is read from pi1 transported by the pattern velocity,
  // sampled every transport_dt and interpolated linearly in time.
  const Grid2D grid = make_pattern_grid(cfg.pattern);
  const auto pattern = make_pattern(cfg.pattern, grid);
  const VectorField2D u = b.velocity == VelocityKind::solid_body ? solid_body_velocity(grid)
                                                                 : perp_gradient(pattern->phi());
  const double tau = b.transport_dt;
  const auto n = static_cast<int>(std::ceil(b.T / tau - 1e-12));
  BearingState s;
  s.pi1 = make_pi1(b.pi1, grid);
  std::vector<Vec2> history;
  history.reserve(n + 1);
  history.push_back(sample_bilinear(gradient(s.pi1), {0.0, 0.0}));
  for (int k = 0; k < n; ++k) {
    s = advect_pi1(s, u, tau, 1);
    history.push_back(sample_bilinear(gradient(s.pi1), {0.0, 0.0}));
  }
  auto g_of_t = [&](double t) {
    const double x = std::clamp(t / tau, 0.0, static_cast<double>(n));
    const int k = std::min(static_cast<int>(x), n - 1);
    const double w = x - k;
    return (1.0 - w) * history[k] + w * history[k + 1];
  };
  const Trajectory tr = integrate_center(b.x0, b.v0, g_of_t, params, b.dt, b.T);
  CsvTable table({"t", "X1", "X2", "V1", "V2", "g1", "g2"});
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const Vec2 g = g_of_t(tr.t[k]);
    table.add_row(
        std::vector<double>{tr.t[k], tr.X[k].x, tr.X[k].y, tr.V[k].x, tr.V[k].y, g.x, g.y});
  }
  sink.write_text("trajectory.csv", table.str());
  sink.finish();
  return sink.files();
}

std::vector<std::string> cmd_evolve(const RunConfig& cfg) {
  const Grid2D grid = make_pattern_grid(cfg.pattern);
  const auto pattern = make_pattern(cfg.pattern, grid);
  const PhysicalParams params = make_params(cfg.physics);
  const LocalField field = reconstruct_pi0(pattern, params, cfg.physics.pi_ambient);
  const auto& e = cfg.evolve;
  const BearingInit pi1{e.pi1_a, e.pi1_g};
  FullState state = init_full_state(field, pi1, e.v0, e.bc);
  const FullState initial = state;

  const double dt0 = e.dt > 0.0 ? e.dt : e.cfl * max_stable_dt(state, params);
  const auto steps = static_cast<long>(std::ceil(e.T / dt0 - 1e-12));
  const double dt = e.T / static_cast<double>(steps);
  StepOptions sopt;
  sopt.kappa = e.kappa;

  // Correlate the travelling anomaly pi0 - pi_ambient against pi - background.
  ScalarField2D reference(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) reference[k] = field.pi0[k] - field.pi_ambient;
  CorrelationOptions copt;
  copt.background = ScalarField2D::from_function(grid, [&](double x, double y) {
    return field.pi_ambient + pi1.a + pi1.g.x * x + pi1.g.y * y;
  });

  OutputSink sink(cfg.output.directory, cfg.hash, "evolve");
  CsvTable ledger({"t", "mass", "momx", "momy", "energy"});
  CsvTable corr({"t", "score", "predicted_x", "predicted_y", "argmax_x", "argmax_y",
                 "argmax_score", "relative_change"});
  auto log_correlation = [&](const FullState& s) {
    const Vec2 shift = constant_gradient_solution({}, e.v0, pi1.g, params, s.t).X;
    const Correlation c = pattern_correlation(s, reference, shift, copt);
    corr.add_row(std::vector<double>{s.t, c.score, shift.x, shift.y, c.argmax_shift.x,
                                     c.argmax_shift.y, c.argmax_score,
                                     relative_l2_change(s.pi, initial.pi)});
    return c;
  };
  auto snapshot = [&](const FullState& s, long step) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "snapshot_%06ld", step);
    write_fields(sink, cfg, stem, {{"pi", &s.pi}}, {{"U", &s.U}});
  };

  const LedgerEntry d0 = diagnostics(state, params);
  ledger.add_row(std::vector<double>{d0.t, d0.mass, d0.momx, d0.momy, d0.energy});
  log_correlation(state);
  if (e.snapshot_stride > 0) snapshot(state, 0);

  double max_mass_drift = 0.0;
  double max_energy_rise = 0.0;
  double prev_energy = d0.energy;
  for (long s = 1; s <= steps; ++s) {
    state = step_full(state, params, dt, sopt);
    state.t = s * dt;
    const LedgerEntry d = diagnostics(state, params);
    ledger.add_row(std::vector<double>{d.t, d.mass, d.momx, d.momy, d.energy});
    max_mass_drift = std::max(max_mass_drift, std::abs(d.mass - d0.mass) / d0.mass);
    max_energy_rise = std::max(max_energy_rise, d.energy - prev_energy);
    prev_energy = d.energy;
    const bool snap = e.snapshot_stride > 0 && s % e.snapshot_stride == 0;
    if (snap) snapshot(state, s);
    if (snap && s != steps) log_correlation(state);
  }
  const Correlation final_corr = log_correlation(state);

  CsvTable summary({"quantity", "value"});
  auto row = [&](const char* name, double v) {
    summary.add_row(std::vector<std::string>{name, format_double(v)});
  };
  row("t_final", state.t);
  row("dt", dt);
  row("steps", static_cast<double>(steps));
  row("correlation", final_corr.score);
  row("relative_change", relative_l2_change(state.pi, initial.pi));
  row("max_relative_mass_drift", max_mass_drift);
  row("max_energy_rise", max_energy_rise);
  row("energy_monotone", max_energy_rise <= 0.0 ? 1.0 : 0.0);

  sink.write_text("ledger.csv", ledger.str());
  sink.write_text("correlation.csv", corr.str());
  sink.write_text("evolve_summary.csv", summary.str());
  write_fields(sink, cfg, "final", {{"pi", &state.pi}}, {{"U", &state.U}});
  sink.finish();
  return sink.files();
}

Command find_command(const std::string& name) {
  static const std::map<std::string, Command> table = {
      {"build", &cmd_build},
      {"verify", &cmd_verify},
      {"transport", &cmd_transport},
      {"trajectory", &cmd_trajectory},
      {"evolve", &cmd_evolve},
  };
  const auto it = table.find(name);
  return it == table.end() ? nullptr : it->second;
}

}  // namespace fpattern
