#include "fpattern/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fpattern/errors.hpp"
#include "fpattern/parallel.hpp"

namespace fpattern {

namespace {

// First derivative along one axis at index k of n samples with stride s.
inline double d1(const double* f, int k, int n, std::ptrdiff_t s, double h) {
  if (k == 0) return (-3.0 * f[0] + 4.0 * f[s] - f[2 * s]) / (2.0 * h);
  if (k == n - 1) return (3.0 * f[0] - 4.0 * f[-s] + f[-2 * s]) / (2.0 * h);
  return (f[s] - f[-s]) / (2.0 * h);
}

// Second derivative along one axis; one-sided (2, -5, 4, -1) at the ends.
inline double d2(const double* f, int k, int n, std::ptrdiff_t s, double h) {
  const double h2 = h * h;
  if (k == 0) return (2.0 * f[0] - 5.0 * f[s] + 4.0 * f[2 * s] - f[3 * s]) / h2;
  if (k == n - 1) return (2.0 * f[0] - 5.0 * f[-s] + 4.0 * f[-2 * s] - f[-3 * s]) / h2;
  return (f[s] - 2.0 * f[0] + f[-s]) / h2;
}

template <class Body>
void for_each_node(const Grid2D& g, Body&& body) {
  parallel_rows(g.ny(), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < g.nx(); ++i) body(i, j);
  });
}

}  // namespace

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!(a == b)) throw ConfigError(std::string(what) + ": fields live on different grids");
}

VectorField2D gradient(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  VectorField2D out(g);
  const double* base = f.values().data();
  const std::ptrdiff_t sy = g.nx();
  for_each_node(g, [&](int i, int j) {
    const double* p = base + g.index(i, j);
    out.x(i, j) = d1(p, i, g.nx(), 1, g.hx());
    out.y(i, j) = d1(p, j, g.ny(), sy, g.hy());
  });
  return out;
}

ScalarField2D laplacian(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  ScalarField2D out(g);
  const double* base = f.values().data();
  const std::ptrdiff_t sy = g.nx();
  for_each_node(g, [&](int i, int j) {
    const double* p = base + g.index(i, j);
    out(i, j) = d2(p, i, g.nx(), 1, g.hx()) + d2(p, j, g.ny(), sy, g.hy());
  });
  return out;
}

Hessian hessian(const ScalarField2D& f) {
  const Grid2D& g = f.grid();
  Hessian hs{ScalarField2D(g), ScalarField2D(g), ScalarField2D(g)};
  const double* base = f.values().data();
  const std::ptrdiff_t sy = g.nx();
  for_each_node(g, [&](int i, int j) {
    const double* p = base + g.index(i, j);
    hs.xx(i, j) = d2(p, i, g.nx(), 1, g.hx());
    hs.yy(i, j) = d2(p, j, g.ny(), sy, g.hy());
  });
  const VectorField2D gr = gradient(f);
  hs.xy = gradient(gr.x).y;
  return hs;
}

ScalarField2D jacobian(const ScalarField2D& a, const ScalarField2D& b) {
  require_same_grid(a.grid(), b.grid(), "jacobian");
  const VectorField2D ga = gradient(a);
  const VectorField2D gb = gradient(b);
  ScalarField2D out(a.grid());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = ga.x[k] * gb.y[k] - ga.y[k] * gb.x[k];
  return out;
}

VectorField2D perp_gradient(const ScalarField2D& phi) {
  VectorField2D g = gradient(phi);
  VectorField2D u(phi.grid());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    u.x[k] = g.y[k];
    u.y[k] = -g.x[k];
  }
  return u;
}

ScalarField2D divergence(const VectorField2D& v) {
  const VectorField2D gx = gradient(v.x);
  const VectorField2D gy = gradient(v.y);
  ScalarField2D out(v.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = gx.x[k] + gy.y[k];
  return out;
}

ScalarField2D squared_magnitude(const VectorField2D& v) {
  ScalarField2D out(v.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = v.x[k] * v.x[k] + v.y[k] * v.y[k];
  return out;
}

Norms interior_norms(const ScalarField2D& f, const Mask2D& excluded) {
  const Grid2D& g = f.grid();
  const bool use_mask = !excluded.empty();
  if (use_mask) require_same_grid(g, excluded.grid(), "interior_norms");
  Norms n;
  double sum = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (use_mask ? excluded(i, j) : g.on_boundary(i, j)) continue;
      const double v = std::abs(f(i, j));
      n.linf = std::max(n.linf, v);
      sum += v * v;
    }
  }
  n.l2 = std::sqrt(sum * g.hx() * g.hy());
  return n;
}

double sample_bilinear(const ScalarField2D& f, Vec2 p) {
  const Grid2D& g = f.grid();
  const double sx = std::clamp((p.x - g.xmin()) / g.hx(), 0.0, double(g.nx() - 1));
  const double sy = std::clamp((p.y - g.ymin()) / g.hy(), 0.0, double(g.ny() - 1));
  const int i = std::min(static_cast<int>(sx), g.nx() - 2);
  const int j = std::min(static_cast<int>(sy), g.ny() - 2);
  const double tx = sx - i;
  const double ty = sy - j;
  const double f00 = f(i, j), f10 = f(i + 1, j), f01 = f(i, j + 1), f11 = f(i + 1, j + 1);
  return (1.0 - ty) * ((1.0 - tx) * f00 + tx * f10) + ty * ((1.0 - tx) * f01 + tx * f11);
}

Vec2 sample_bilinear(const VectorField2D& v, Vec2 p) {
  return {sample_bilinear(v.x, p), sample_bilinear(v.y, p)};
}

double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

double circulation(const VectorField2D& u, Vec2 center, double radius, int samples) {
  if (!(radius > 0.0)) throw ConfigError("circulation: radius must be positive");
  if (samples < 8) throw ConfigError("circulation: need at least 8 samples");
  const double dtheta = 2.0 * std::numbers::pi / samples;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double th = (k + 0.5) * dtheta;
    const Vec2 p{center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
    const Vec2 tangent{-std::sin(th), std::cos(th)};
    sum += dot(sample_bilinear(u, p), tangent);
  }
  return sum * radius * dtheta;
}

}  // namespace fpattern
