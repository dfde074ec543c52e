#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fpattern/bearing.hpp"
#include "fpattern/errors.hpp"
#include "fpattern/ops.hpp"
#include "fpattern/pattern.hpp"

using namespace fpattern;

namespace {

const PhysicalParams kParams = PhysicalParams::make(1.5, 1.0, 1.0);
constexpr double kPi = std::numbers::pi;

Grid2D square(int n, double half) { return make_grid(n, n, {-half, half, -half, half}); }

double bump(double x, double y) {
  return 1.0 + 0.2 * x + std::exp(-8.0 * ((x - 0.3) * (x - 0.3) + y * y));
}

// Oracle for V' = -l L V - c0 g with constant g, written in complex form:
// w = V1 + i V2, L w = i w, so w(t) = w* + (w0 - w*) e^{-i l t}.
std::complex<double> oracle_velocity(std::complex<double> w0, std::complex<double> g, double c0,
                                     double l, double t) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> ws = (c0 / l) * i * g;
  return ws + (w0 - ws) * std::exp(-i * l * t);
}

}  // namespace

TEST_CASE("transport under zero velocity changes nothing") {
  const Grid2D g = square(33, 1.0);
  BearingState s{ScalarField2D::from_function(g, bump), {}, {}, 0.0};
  const BearingState out = advect_pi1(s, ScalarField2D(g), 0.1, 25);
  CHECK(out.pi1 == s.pi1);
  CHECK(out.t == doctest::Approx(2.5));
}

TEST_CASE("solid-body rotation matches exact characteristics") {
  const double t = 1.0;
  const double dt = 0.05;
  const int steps = 20;
  double err_map[2], err_rot[2];
  for (int r = 0; r < 2; ++r) {
    const Grid2D g = square(r == 0 ? 129 : 257, 1.5);
    const auto phi = ScalarField2D::from_function(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
    BearingState s{ScalarField2D::from_function(g, bump), {}, {}, 0.0};
    const BearingState out = advect_pi1(s, phi, dt, steps);
    err_map[r] = err_rot[r] = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const Vec2 x = g.node(i, j);
        if (norm(x) > 1.0) continue;
        // u = (x2, -x1) turns points clockwise; the value at x came from x
        // rotated anticlockwise by t.
        const double c = std::cos(t), sn = std::sin(t);
        err_rot[r] = std::max(err_rot[r], std::abs(out.pi1(i, j) - bump(c * x.x - sn * x.y, sn * x.x + c * x.y)));
        // The midpoint foot of u = -L x is (I + dt L + dt^2 L^2 / 2) x.
        Vec2 f = x;
        for (int k = 0; k < steps; ++k) f = f + dt * apply_L(f) + 0.5 * dt * dt * apply_L(apply_L(f));
        err_map[r] = std::max(err_map[r], std::abs(out.pi1(i, j) - bump(f.x, f.y)));
      }
    }
  }
  // Interpolation error is O(h^2) per step at fixed dt; the foot map adds O(dt^2).
  CHECK(observed_order(err_map[0], err_map[1]) > 1.8);
  CHECK(err_rot[1] < err_rot[0]);
}

TEST_CASE("transport preserves the range and the gradient bound under solid-body rotation") {
  // The field is constant near the edges, where feet leave the grid.
  const Grid2D g = square(257, 1.5);
  const auto phi = ScalarField2D::from_function(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
  BearingState s{ScalarField2D::from_function(g, [](double x, double y) { return bump(x, y) - 0.2 * x; }), {}, {}, 0.0};
  const double lo = s.pi1.min(), hi = s.pi1.max();
  const double g0 = sup_grad_norm(s.pi1);
  const BearingState out = advect_pi1(s, phi, 0.02, 100);
  CHECK(out.pi1.min() >= lo);
  CHECK(out.pi1.max() <= hi);
  CHECK(sup_grad_norm(out.pi1) <= 1.05 * g0);
}

TEST_CASE("transport leaves pi1 unchanged outside a compact pattern") {
  const Pattern p = build_axisymmetric(quintic_bump(0.6, 0.5), square(65, 1.0));
  const Grid2D& g = p.grid();
  BearingState s{ScalarField2D::from_function(g, bump), {}, {}, 0.0};
  const BearingState out = advect_pi1(s, p.phi(), 0.01, 200);
  int changed_inside = 0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (norm(g.node(i, j)) > 0.6 + g.h()) CHECK(out.pi1(i, j) == s.pi1(i, j));
      else if (out.pi1(i, j) != s.pi1(i, j)) ++changed_inside;
    }
  }
  CHECK(changed_inside > 0);
}

TEST_CASE("advect_pi1 validates arguments") {
  const Grid2D g = square(9, 1.0);
  BearingState s{ScalarField2D(g, 1.0), {}, {}, 0.0};
  CHECK_THROWS_AS(advect_pi1(s, ScalarField2D(g), 0.0, 1), ConfigError);
  CHECK_THROWS_AS(advect_pi1(s, ScalarField2D(square(11, 1.0)), 0.1, 1), ConfigError);
}

TEST_CASE("sup_grad_norm examples") {
  const Grid2D g = square(17, 1.0);
  CHECK(sup_grad_norm(ScalarField2D(g, 4.0)) == 0.0);
  const auto lin = ScalarField2D::from_function(g, [](double x, double y) { return 2.0 + 0.3 * x - 0.4 * y; });
  CHECK(sup_grad_norm(lin) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("discrepancy examples") {
  const Grid2D g = square(65, 1.0);
  const auto lin = ScalarField2D::from_function(g, [](double x, double y) { return 7.0 + 0.3 * x - 0.4 * y; });
  const VectorField2D q0 = discrepancy_Q(lin, kParams);
  CHECK(interior_norms(q0.x).linf <= 1e-13);
  CHECK(interior_norms(q0.y).linf <= 1e-13);

  const auto quad = ScalarField2D::from_function(g, [](double x, double) { return 0.5 * x * x; });
  const VectorField2D q = discrepancy_Q(quad, kParams);
  // Node (48, 32) is (0.5, 0).
  CHECK(q.at(48, 32).x == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::abs(q.at(48, 32).y) <= 1e-13);

  // Adding a constant and a linear function leaves Q unchanged.
  ScalarField2D shifted = quad;
  for (std::size_t k = 0; k < g.size(); ++k) shifted[k] += lin[k];
  const VectorField2D qs = discrepancy_Q(shifted, kParams);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(qs.x[k] == doctest::Approx(q.x[k]).scale(1.0).epsilon(1e-12));
    CHECK(qs.y[k] == doctest::Approx(q.y[k]).scale(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(discrepancy_Q(ScalarField2D(make_grid(9, 9, {1, 2, 1, 2})), kParams), ConfigError);
}

TEST_CASE("discrepancy bound on random smooth fields") {
  const Grid2D g = square(65, 1.0);
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double a[6];
    for (double& v : a) v = coef(rng);
    const auto f = ScalarField2D::from_function(g, [&](double x, double y) {
      return a[0] * std::sin(2 * x + a[1]) * std::cos(3 * y) + a[2] * x * y + a[3] * std::exp(a[4] * x - y) + a[5];
    });
    const VectorField2D q = discrepancy_Q(f, kParams);
    double qmax = 0.0;
    for (int j = 1; j < g.ny() - 1; ++j)
      for (int i = 1; i < g.nx() - 1; ++i) qmax = std::max(qmax, norm(q.at(i, j)));
    CHECK(qmax <= 2.0 * kParams.c0() * sup_grad_norm(f));
  }
}

TEST_CASE("trajectory: equilibrium and inertial circle") {
  const Trajectory rest = integrate_center({0.3, -0.2}, {}, [](double) { return Vec2{}; }, kParams, 0.01, 1.0);
  CHECK(rest.X.back() == Vec2{0.3, -0.2});
  CHECK(rest.scheme == "rk4");

  const double T = 2 * kPi;
  const Trajectory c = integrate_center({}, {1.0, 0.0}, [](double) { return Vec2{}; }, kParams, 1e-3, T);
  CHECK(c.t.size() == c.X.size());
  double rmax = 0.0;
  for (std::size_t k = 0; k < c.V.size(); ++k) {
    CHECK(norm(c.V[k]) == doctest::Approx(1.0).epsilon(1e-10));
    // Inertial circle of radius v / l about (0, -1).
    rmax = std::max(rmax, std::abs(norm(c.X[k] - Vec2{0.0, -1.0}) - 1.0));
  }
  CHECK(rmax < 1e-8);
  CHECK(norm(c.V.back() - Vec2{1.0, 0.0}) < 1e-8);
  CHECK(norm(c.X.back()) < 1e-8);
  // A quarter period later V has turned clockwise.
  const Trajectory q = integrate_center({}, {1.0, 0.0}, [](double) { return Vec2{}; }, kParams, 1e-3, 0.5 * kPi);
  CHECK(norm(q.V.back() - Vec2{0.0, -1.0}) < 1e-8);
}

TEST_CASE("trajectory: constant bearing gradient") {
  const Vec2 g{0.0, 0.01};
  const Vec2 vs = geostrophic_drift(g, kParams);
  CHECK(vs.x == doctest::Approx(-0.03));
  CHECK(vs.y == 0.0);

  const Vec2 V0{0.1, 0.05};
  const double T = 4 * kPi;
  const Trajectory tr = integrate_center({}, V0, [g](double) { return g; }, kParams, 1e-3, T);
  const std::complex<double> w = oracle_velocity({V0.x, V0.y}, {g.x, g.y}, 3.0, 1.0, T);
  CHECK(std::abs(tr.V.back().x - w.real()) < 1e-8);
  CHECK(std::abs(tr.V.back().y - w.imag()) < 1e-8);
  for (const Vec2& v : tr.V) CHECK(norm(v - vs) == doctest::Approx(norm(V0 - vs)).epsilon(1e-9));

  const CenterState ex = constant_gradient_solution({}, V0, g, kParams, T);
  CHECK(norm(tr.X.back() - ex.X) < 1e-8);
  CHECK(norm(tr.V.back() - ex.V) < 1e-8);
  // Two full periods: the position has drifted by V* T.
  CHECK(norm(ex.X - T * vs) < 1e-12);
}

TEST_CASE("trajectory integrator is fourth order") {
  const Vec2 g{0.02, -0.01};
  const Vec2 V0{0.3, 0.0};
  const PhysicalParams p = PhysicalParams::make(1.4, 1.3, 2.0);
  const double T = 3.0;
  double e[3];
  int k = 0;
  for (double dt : {0.1, 0.05, 0.025}) {
    const Trajectory tr = integrate_center({}, V0, [g](double) { return g; }, p, dt, T);
    const CenterState ex = constant_gradient_solution({}, V0, g, p, T);
    e[k++] = norm(tr.V.back() - ex.V);
  }
  CHECK(observed_order(e[0], e[1]) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(observed_order(e[1], e[2]) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("trajectory adjusts dt to land on T") {
  const Trajectory tr = integrate_center({}, {}, [](double) { return Vec2{}; }, kParams, 0.3, 1.0);
  CHECK(tr.t.size() == 5u);
  CHECK(tr.dt == doctest::Approx(0.25));
  CHECK(tr.t.back() == doctest::Approx(1.0));
  CHECK_THROWS_AS(integrate_center({}, {}, [](double) { return Vec2{}; }, kParams, 0.0, 1.0), ConfigError);
  CHECK_THROWS_WITH_AS(
      integrate_center({}, {}, [](double t) { return Vec2{t > 0.5 ? NAN : 0.0, 0.0}; }, kParams, 0.1, 1.0),
      doctest::Contains("t = "), NumericalError);
}
