#include <cmath>
#include <string>

#include "doctest.h"
#include "fpattern/errors.hpp"
#include "fpattern/fields.hpp"
#include "fpattern/ops.hpp"

using namespace fpattern;

namespace {

Grid2D unit_grid(int n) { return make_grid(n, n, {0.0, 1.0, 0.0, 1.0}); }

double interior_max_error(const ScalarField2D& f, const std::function<double(double, double)>& exact) {
  const Grid2D& g = f.grid();
  double err = 0.0;
  for (int j = 1; j < g.ny() - 1; ++j)
    for (int i = 1; i < g.nx() - 1; ++i)
      err = std::max(err, std::abs(f(i, j) - exact(g.x(i), g.y(j))));
  return err;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("make_grid rejects too few nodes and degenerate bounds") {
  CHECK(message_of([] { make_grid(3, 3, {0, 1, 0, 1}); }).find("nx") != std::string::npos);
  CHECK(message_of([] { make_grid(4, 3, {0, 1, 0, 1}); }).find("ny") != std::string::npos);
  CHECK(message_of([] { make_grid(4, 4, {0, 1, 1, 1}); }).find("ymax") != std::string::npos);
  CHECK(message_of([] { make_grid(4, 4, {2, 1, 0, 1}); }).find("xmax") != std::string::npos);
}

TEST_CASE("make_grid spacing and node coordinates") {
  const Grid2D g = unit_grid(5);
  CHECK(g.hx() == 0.25);
  CHECK(g.hy() == 0.25);
  CHECK(g.node(2, 2) == Vec2{0.5, 0.5});
  CHECK(g.index(3, 1) == 8u);
  CHECK(g.on_boundary(0, 2));
  CHECK_FALSE(g.on_boundary(2, 2));
}

TEST_CASE("gradient is exact on linear and quadratic fields") {
  const Grid2D g = make_grid(11, 11, {0.0, 1.0, 0.0, 1.0});
  const VectorField2D gx = gradient(ScalarField2D::from_function(g, [](double x, double) { return x; }));
  const VectorField2D gc = gradient(ScalarField2D(g, 3.5));
  const VectorField2D gq =
      gradient(ScalarField2D::from_function(g, [](double x, double) { return x * x; }));
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      CHECK(gx.x(i, j) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(gx.y(i, j)) < 1e-12);
      CHECK(gc.x(i, j) == 0.0);
      CHECK(gc.y(i, j) == 0.0);
      // The one-sided boundary stencil is also exact on quadratics.
      CHECK(gq.x(i, j) == doctest::Approx(2.0 * g.x(i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("laplacian examples") {
  const Grid2D g = make_grid(11, 11, {0.0, 1.0, 0.0, 1.0});
  const ScalarField2D q =
      laplacian(ScalarField2D::from_function(g, [](double x, double y) { return x * x + y * y; }));
  const ScalarField2D lin =
      laplacian(ScalarField2D::from_function(g, [](double x, double y) { return 2 * x - y + 1; }));
  for (int j = 1; j < g.ny() - 1; ++j) {
    for (int i = 1; i < g.nx() - 1; ++i) {
      CHECK(q(i, j) == doctest::Approx(4.0).epsilon(1e-11));
      CHECK(std::abs(lin(i, j)) < 1e-10);
    }
  }

  // f = x^4 at x = 1 with h = 0.1: 12 x^2 + h^2/12 * 24 = 12.02.
  const Grid2D g4 = make_grid(21, 5, {0.0, 2.0, 0.0, 0.4});
  const ScalarField2D l4 =
      laplacian(ScalarField2D::from_function(g4, [](double x, double) { return std::pow(x, 4); }));
  CHECK(l4(10, 2) == doctest::Approx(12.02).epsilon(1e-12));
}

TEST_CASE("jacobian examples and antisymmetry") {
  const Grid2D g = make_grid(17, 17, {-1.0, 1.0, -1.0, 1.0});
  const auto x1 = ScalarField2D::from_function(g, [](double x, double) { return x; });
  const auto x2 = ScalarField2D::from_function(g, [](double, double y) { return y; });
  const auto x1sq = ScalarField2D::from_function(g, [](double x, double) { return x * x; });
  const auto f = ScalarField2D::from_function(
      g, [](double x, double y) { return std::sin(2 * x) * std::cos(y) + x * y * y; });
  const auto k = ScalarField2D::from_function(
      g, [](double x, double y) { return std::exp(x - 0.5 * y); });

  const ScalarField2D j12 = jacobian(x1, x2);
  const ScalarField2D jff = jacobian(f, f);
  const ScalarField2D jq = jacobian(x1sq, x2);
  const ScalarField2D jfk = jacobian(f, k);
  const ScalarField2D jkf = jacobian(k, f);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      CHECK(j12(i, j) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(jff(i, j) == 0.0);
      CHECK(jq(i, j) == doctest::Approx(2.0 * g.x(i)).epsilon(1e-12));
      CHECK(jfk(i, j) == -jkf(i, j));
    }
  }

  const Grid2D other = make_grid(9, 9, {0.0, 1.0, 0.0, 1.0});
  CHECK_THROWS_AS(jacobian(x1, ScalarField2D(other)), ConfigError);
}

TEST_CASE("perp_gradient examples") {
  const Grid2D g = make_grid(11, 11, {-1.0, 1.0, -1.0, 1.0});
  const VectorField2D a = perp_gradient(ScalarField2D::from_function(g, [](double x, double) { return x; }));
  const VectorField2D b = perp_gradient(ScalarField2D::from_function(g, [](double, double y) { return y; }));
  const VectorField2D c = perp_gradient(
      ScalarField2D::from_function(g, [](double x, double y) { return 0.5 * (x * x + y * y); }));
  CHECK(a.at(4, 7).x == doctest::Approx(0.0));
  CHECK(a.at(4, 7).y == doctest::Approx(-1.0));
  CHECK(b.at(4, 7).x == doctest::Approx(1.0));
  CHECK(b.at(4, 7).y == doctest::Approx(0.0));
  // Node (10, 5) sits at (1, 0).
  CHECK(c.at(10, 5).x == doctest::Approx(0.0).scale(1.0));
  CHECK(c.at(10, 5).y == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("discrete divergence of perp_gradient vanishes at interior nodes") {
  const Grid2D g = make_grid(33, 29, {-1.0, 1.3, -0.7, 1.1});
  const auto phi = ScalarField2D::from_function(
      g, [](double x, double y) { return std::sin(3 * x * y) + std::exp(x) * y * y * y; });
  const ScalarField2D d = divergence(perp_gradient(phi));
  double worst = 0.0;
  for (int j = 1; j < g.ny() - 1; ++j)
    for (int i = 1; i < g.nx() - 1; ++i) worst = std::max(worst, std::abs(d(i, j)));
  CHECK(worst < 1e-11);
}

TEST_CASE("operators converge at second order") {
  auto f = [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y); };
  auto fx = [](double x, double y) { return 2 * std::cos(2 * x) * std::cos(3 * y); };
  auto lap = [](double x, double y) { return -13 * std::sin(2 * x) * std::cos(3 * y); };
  auto k = [](double x, double y) { return x * x * y + std::cos(y); };
  auto jac = [&](double x, double y) {
    const double ky = x * x - std::sin(y);
    const double kx = 2 * x * y;
    return fx(x, y) * ky - (-3 * std::sin(2 * x) * std::sin(3 * y)) * kx;
  };
  double eg[2], el[2], ej[2];
  for (int r = 0; r < 2; ++r) {
    const Grid2D g = r == 0 ? unit_grid(33) : unit_grid(65);
    const auto F = ScalarField2D::from_function(g, f);
    const auto K = ScalarField2D::from_function(g, k);
    eg[r] = interior_max_error(gradient(F).x, fx);
    el[r] = interior_max_error(laplacian(F), lap);
    ej[r] = interior_max_error(jacobian(F, K), jac);
  }
  for (const double* e : {eg, el, ej}) {
    const double ratio = e[0] / e[1];
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("interior norms skip the boundary ring") {
  const Grid2D g = unit_grid(5);
  ScalarField2D f(g, 0.0);
  f(0, 0) = 100.0;
  f(2, 2) = -2.0;
  const Norms n = interior_norms(f);
  CHECK(n.linf == 2.0);
  CHECK(n.l2 == doctest::Approx(std::sqrt(g.hx() * g.hy() * 4.0)));
}

TEST_CASE("bilinear sampling reproduces bilinear functions and clamps") {
  const Grid2D g = make_grid(7, 9, {-1.0, 2.0, 0.0, 1.0});
  const auto f = ScalarField2D::from_function(g, [](double x, double y) { return 1 + 2 * x - y + 0.5 * x * y; });
  CHECK(sample_bilinear(f, {0.33, 0.71}) == doctest::Approx(1 + 0.66 - 0.71 + 0.5 * 0.33 * 0.71));
  CHECK(sample_bilinear(f, {5.0, 0.5}) == doctest::Approx(sample_bilinear(f, {2.0, 0.5})));
}
