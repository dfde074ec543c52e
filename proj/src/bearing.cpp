#include "fpattern/bearing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fpattern/errors.hpp"
#include "fpattern/ops.hpp"
#include "fpattern/parallel.hpp"

namespace fpattern {

BearingState advect_pi1(const BearingState& state, const ScalarField2D& phi, double dt,
                        int steps) {
  require_same_grid(state.pi1.grid(), phi.grid(), "advect_pi1");
  return advect_pi1(state, perp_gradient(phi), dt, steps);
}

BearingState advect_pi1(const BearingState& state, const VectorField2D& u, double dt, int steps) {
  if (!(dt > 0.0)) throw ConfigError("advect_pi1: dt must be positive");
  if (steps < 0) throw ConfigError("advect_pi1: steps must be non-negative");
  const Grid2D& g = state.pi1.grid();
  require_same_grid(g, u.grid(), "advect_pi1");

  // Feet depend only on the steady velocity, so trace them once.
  std::vector<Vec2> feet(g.size());
  std::vector<char> moved(g.size(), 0);
  std::vector<char> left_grid(g.size(), 0);
  parallel_rows(g.ny(), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.index(i, j);
      const Vec2 x = g.node(i, j);
      const Vec2 u0{u.x[k], u.y[k]};
      const Vec2 mid = x - 0.5 * dt * u0;
      const Vec2 disp = dt * sample_bilinear(u, mid);
      if (disp.x == 0.0 && disp.y == 0.0 && u0.x == 0.0 && u0.y == 0.0) continue;
      moved[k] = 1;
      feet[k] = x - disp;
      left_grid[k] = g.contains(feet[k]) ? 0 : 1;
    }
  });

  BearingState out = state;
  ScalarField2D next = state.pi1;
  for (int s = 0; s < steps; ++s) {
    const ScalarField2D& cur = out.pi1;
    parallel_rows(g.ny(), [&](std::size_t row) {
      const int j = static_cast<int>(row);
      for (int i = 0; i < g.nx(); ++i) {
        const std::size_t k = g.index(i, j);
        if (!moved[k]) {
          next[k] = cur[k];
          continue;
        }
        const ScalarField2D& src = left_grid[k] ? state.pi1 : cur;
        next[k] = sample_bilinear(src, feet[k]);
      }
    });
    if (!next.all_finite()) {
      throw NumericalError("advect_pi1: non-finite value at step " + std::to_string(s));
    }
    std::swap(out.pi1, next);
    out.t += dt;
  }
  return out;
}

double sup_grad_norm(const ScalarField2D& pi1) {
  const VectorField2D gr = gradient(pi1);
  const Grid2D& g = pi1.grid();
  double best = 0.0;
  for (int j = 1; j < g.ny() - 1; ++j)
    for (int i = 1; i < g.nx() - 1; ++i) best = std::max(best, norm(gr.at(i, j)));
  return best;
}

VectorField2D discrepancy_Q(const ScalarField2D& pi1, const PhysicalParams& params) {
  const Grid2D& g = pi1.grid();
  if (!g.contains({0.0, 0.0}))
    throw ConfigError("discrepancy_Q: the local-frame origin lies outside the grid");
  const VectorField2D gr = gradient(pi1);
  const Vec2 g0 = sample_bilinear(gr, {0.0, 0.0});
  VectorField2D q(g);
  const double c0 = params.c0();
  for (std::size_t k = 0; k < g.size(); ++k) {
    q.x[k] = -c0 * (gr.x[k] - g0.x);
    q.y[k] = -c0 * (gr.y[k] - g0.y);
  }
  return q;
}

Trajectory integrate_center(Vec2 X0, Vec2 V0, const GradientHistory& grad,
                            const PhysicalParams& params, double dt, double T) {
  if (!(dt > 0.0)) throw ConfigError("integrate_center: dt must be positive");
  if (!(T >= dt)) throw ConfigError("integrate_center: T must be at least dt");
  auto n = static_cast<long>(std::llround(T / dt));
  if (std::abs(n * dt - T) > 1e-12 * T) n = static_cast<long>(std::ceil(T / dt));
  const double h = T / static_cast<double>(n);

  const double l = params.l();
  const double c0 = params.c0();
  // State derivative: (X', V') = (V, -l L V - c0 g).
  auto accel = [&](double t, Vec2 v) {
    const Vec2 g = grad(t);
    return -l * apply_L(v) - c0 * g;
  };

  Trajectory tr;
  tr.dt = h;
  tr.t.reserve(n + 1);
  tr.X.reserve(n + 1);
  tr.V.reserve(n + 1);
  Vec2 X = X0;
  Vec2 V = V0;
  tr.t.push_back(0.0);
  tr.X.push_back(X);
  tr.V.push_back(V);
  for (long s = 0; s < n; ++s) {
    const double t = s * h;
    const Vec2 kx1 = V;
    const Vec2 kv1 = accel(t, V);
    const Vec2 kx2 = V + 0.5 * h * kv1;
    const Vec2 kv2 = accel(t + 0.5 * h, kx2);
    const Vec2 kx3 = V + 0.5 * h * kv2;
    const Vec2 kv3 = accel(t + 0.5 * h, kx3);
    const Vec2 kx4 = V + h * kv3;
    const Vec2 kv4 = accel(t + h, kx4);
    X = X + (h / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
    V = V + (h / 6.0) * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4);
    const double tn = (s + 1) * h;
    if (!std::isfinite(X.x) || !std::isfinite(X.y) || !std::isfinite(V.x) || !std::isfinite(V.y)) {
      std::ostringstream msg;
      msg << "integrate_center: non-finite state at t = " << tn;
      throw NumericalError(msg.str());
    }
    tr.t.push_back(tn);
    tr.X.push_back(X);
    tr.V.push_back(V);
  }
  return tr;
}

Vec2 geostrophic_drift(Vec2 g, const PhysicalParams& params) {
  return (params.c0() / params.l()) * apply_L(g);
}

CenterState constant_gradient_solution(Vec2 X0, Vec2 V0, Vec2 g, const PhysicalParams& params,
                                       double t) {
  const double l = params.l();
  const Vec2 vs = geostrophic_drift(g, params);
  const Vec2 w0 = V0 - vs;
  const double c = std::cos(l * t);
  const double s = std::sin(l * t);
  // exp(-l t L) w0, a clockwise rotation by l t.
  const Vec2 w{c * w0.x + s * w0.y, -s * w0.x + c * w0.y};
  // integral of exp(-l s L) ds = (1/l) L (exp(-l t L) - I).
  const Vec2 disp = (1.0 / l) * apply_L(w - w0);
  return {X0 + t * vs + disp, vs + w};
}

}  // namespace fpattern
