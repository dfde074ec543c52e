#include "fpattern/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fpattern/errors.hpp"
#include "fpattern/ops.hpp"
#include "fpattern/parallel.hpp"

namespace fpattern {

namespace {

// Neighbour tables along one axis. Active nodes are updated by the scheme;
// the rest are filled by the boundary rule.
struct Axis {
  int n = 0;
  int begin = 0;
  int end = 0;
  std::vector<int> m2, m1, p1, p2;
  std::vector<char> d4;

  Axis(int count, BoundaryKind bc) : n(count), m2(count), m1(count), p1(count), p2(count), d4(count) {
    if (bc == BoundaryKind::periodic) {
      const int nu = n - 1;
      begin = 0;
      end = nu;
      for (int i = 0; i < n; ++i) {
        const int w = i % nu;
        m2[i] = (w - 2 + 2 * nu) % nu;
        m1[i] = (w - 1 + nu) % nu;
        p1[i] = (w + 1) % nu;
        p2[i] = (w + 2) % nu;
        d4[i] = 1;
      }
    } else {
      begin = 1;
      end = n - 1;
      for (int i = 0; i < n; ++i) {
        m1[i] = std::max(i - 1, 0);
        p1[i] = std::min(i + 1, n - 1);
        m2[i] = std::max(i - 2, 0);
        p2[i] = std::min(i + 2, n - 1);
        d4[i] = (i >= 2 && i <= n - 3) ? 1 : 0;
      }
    }
  }
};

struct Fields {
  std::vector<double> rho, pi, ux, uy;
  explicit Fields(std::size_t n) : rho(n), pi(n), ux(n), uy(n) {}
};

struct Scheme {
  const Grid2D& g;
  BoundaryKind bc;
  Axis ax, ay;
  double l, c0, kappa;
  double pi_scale;  // pi = pi_scale * rho^(gamma-1)
  double gm1;

  Scheme(const Grid2D& grid, BoundaryKind b, const PhysicalParams& p, double k)
      : g(grid), bc(b), ax(grid.nx(), b), ay(grid.ny(), b), l(p.l()), c0(p.c0()), kappa(k),
        pi_scale(std::pow(p.C(), (p.gamma() - 1.0) / p.gamma())), gm1(p.gamma() - 1.0) {}

  double rho_of(double pi) const { return std::pow(pi / pi_scale, 1.0 / gm1); }
  double pi_of(double rho) const { return pi_scale * std::pow(rho, gm1); }

  void rhs(const Fields& f, Fields& d) const {
    const int nx = g.nx();
    const double hx = g.hx();
    const double hy = g.hy();
    const double kx = kappa / hx;
    const double ky = kappa / hy;
    const double* rho = f.rho.data();
    const double* pi = f.pi.data();
    const double* ux = f.ux.data();
    const double* uy = f.uy.data();
    parallel_rows(static_cast<std::size_t>(ay.end - ay.begin), [&](std::size_t row) {
      const int j = ay.begin + static_cast<int>(row);
      const std::size_t rj = static_cast<std::size_t>(j) * nx;
      const std::size_t rjm = static_cast<std::size_t>(ay.m1[j]) * nx;
      const std::size_t rjp = static_cast<std::size_t>(ay.p1[j]) * nx;
      const std::size_t rjm2 = static_cast<std::size_t>(ay.m2[j]) * nx;
      const std::size_t rjp2 = static_cast<std::size_t>(ay.p2[j]) * nx;
      const bool dy4 = ay.d4[j] != 0;
      for (int i = ax.begin; i < ax.end; ++i) {
        const std::size_t k = rj + i;
        const std::size_t xm = rj + ax.m1[i], xp = rj + ax.p1[i];
        const std::size_t ym = rjm + i, yp = rjp + i;
        const double u = ux[k], v = uy[k];

        double dr = -((rho[xp] * ux[xp] - rho[xm] * ux[xm]) / (2.0 * hx) +
                      (rho[yp] * uy[yp] - rho[ym] * uy[ym]) / (2.0 * hy));
        const double ux_x = (ux[xp] - ux[xm]) / (2.0 * hx);
        const double ux_y = (ux[yp] - ux[ym]) / (2.0 * hy);
        const double uy_x = (uy[xp] - uy[xm]) / (2.0 * hx);
        const double uy_y = (uy[yp] - uy[ym]) / (2.0 * hy);
        double du = -(u * ux_x + v * ux_y) + l * v - c0 * (pi[xp] - pi[xm]) / (2.0 * hx);
        double dv = -(u * uy_x + v * uy_y) - l * u - c0 * (pi[yp] - pi[ym]) / (2.0 * hy);

        if (ax.d4[i]) {
          const std::size_t xm2 = rj + ax.m2[i], xp2 = rj + ax.p2[i];
          auto d4 = [&](const double* q) {
            return q[xm2] - 4.0 * q[xm] + 6.0 * q[k] - 4.0 * q[xp] + q[xp2];
          };
          dr -= kx * d4(rho);
          du -= kx * d4(ux);
          dv -= kx * d4(uy);
        }
        if (dy4) {
          const std::size_t ym2 = rjm2 + i, yp2 = rjp2 + i;
          auto d4 = [&](const double* q) {
            return q[ym2] - 4.0 * q[ym] + 6.0 * q[k] - 4.0 * q[yp] + q[yp2];
          };
          dr -= ky * d4(rho);
          du -= ky * d4(ux);
          dv -= ky * d4(uy);
        }
        d.rho[k] = dr;
        d.ux[k] = du;
        d.uy[k] = dv;
      }
    });
  }

  // pi from rho on active nodes, then the boundary rule for pi, U, rho.
  void close(Fields& f, int stage, double t) const {
    const int nx = g.nx();
    const int ny = g.ny();
    for (int j = ay.begin; j < ay.end; ++j) {
      for (int i = ax.begin; i < ax.end; ++i) {
        const std::size_t k = g.index(i, j);
        if (!(f.rho[k] > 0.0) || !std::isfinite(f.ux[k]) || !std::isfinite(f.uy[k])) {
          std::ostringstream msg;
          msg << "step_full: non-finite or non-positive state at node (" << i << ", " << j
              << "), stage " << stage << ", t = " << t;
          throw NumericalError(msg.str());
        }
        f.pi[k] = pi_of(f.rho[k]);
      }
    }
    if (bc == BoundaryKind::periodic) {
      auto copy = [&](std::size_t dst, std::size_t src) {
        f.rho[dst] = f.rho[src];
        f.pi[dst] = f.pi[src];
        f.ux[dst] = f.ux[src];
        f.uy[dst] = f.uy[src];
      };
      for (int j = 0; j < ny - 1; ++j) copy(g.index(nx - 1, j), g.index(0, j));
      for (int i = 0; i < nx; ++i) copy(g.index(i, ny - 1), g.index(i, 0));
    } else {
      auto extrap = [&](std::size_t dst, std::size_t a, std::size_t b) {
        f.pi[dst] = 2.0 * f.pi[a] - f.pi[b];
        f.ux[dst] = 2.0 * f.ux[a] - f.ux[b];
        f.uy[dst] = 2.0 * f.uy[a] - f.uy[b];
        if (!(f.pi[dst] > 0.0))
          throw NumericalError("step_full: extrapolated boundary pi is non-positive");
        f.rho[dst] = rho_of(f.pi[dst]);
      };
      for (int j = 1; j < ny - 1; ++j) {
        extrap(g.index(0, j), g.index(1, j), g.index(2, j));
        extrap(g.index(nx - 1, j), g.index(nx - 2, j), g.index(nx - 3, j));
      }
      for (int i = 0; i < nx; ++i) {
        extrap(g.index(i, 0), g.index(i, 1), g.index(i, 2));
        extrap(g.index(i, ny - 1), g.index(i, ny - 2), g.index(i, ny - 3));
      }
    }
  }
};

std::vector<double> trapezoid_weights(const Grid2D& g, BoundaryKind bc) {
  std::vector<double> w(g.size());
  const double cell = g.hx() * g.hy();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      double wx, wy;
      if (bc == BoundaryKind::periodic) {
        wx = i == g.nx() - 1 ? 0.0 : 1.0;
        wy = j == g.ny() - 1 ? 0.0 : 1.0;
      } else {
        wx = (i == 0 || i == g.nx() - 1) ? 0.5 : 1.0;
        wy = (j == 0 || j == g.ny() - 1) ? 0.5 : 1.0;
      }
      w[g.index(i, j)] = wx * wy * cell;
    }
  }
  return w;
}

}  // namespace

FullState init_full_state(const LocalField& field, BearingInit pi1, Vec2 V0, BoundaryKind bc) {
  const Grid2D& g = field.pi0.grid();
  if (bc == BoundaryKind::periodic && (pi1.g.x != 0.0 || pi1.g.y != 0.0))
    throw ConfigError("init_full_state: a linear bearing field needs the extrapolation boundary");
  FullState s;
  s.bc = bc;
  s.pi = ScalarField2D(g);
  s.U = VectorField2D(g);
  double worst = std::numeric_limits<double>::infinity();
  int wi = 0, wj = 0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const Vec2 x = g.node(i, j);
      const double p = field.pi0(i, j) + pi1.a + dot(pi1.g, x);
      s.pi(i, j) = p;
      s.U.set(i, j, field.u.at(i, j) + V0);
      if (p < worst) {
        worst = p;
        wi = i;
        wj = j;
      }
    }
  }
  if (!(worst > 0.0)) {
    std::ostringstream msg;
    msg << "init_full_state: pi0 + pi1 = " << worst << " <= 0 at node (" << wi << ", " << wj
        << ")";
    throw NumericalError(msg.str());
  }
  if (bc == BoundaryKind::periodic) {
    for (int j = 0; j < g.ny(); ++j) {
      s.pi(g.nx() - 1, j) = s.pi(0, j);
      s.U.set(g.nx() - 1, j, s.U.at(0, j));
    }
    for (int i = 0; i < g.nx(); ++i) {
      s.pi(i, g.ny() - 1) = s.pi(i, 0);
      s.U.set(i, g.ny() - 1, s.U.at(i, 0));
    }
  }
  return s;
}

double max_stable_dt(const FullState& state, const PhysicalParams& params) {
  const Grid2D& g = state.pi.grid();
  double speed = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double c = std::sqrt(std::max(0.0, params.sound_speed_sq(state.pi[k])));
    speed = std::max(speed, std::hypot(state.U.x[k], state.U.y[k]) + c);
  }
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return 0.4 * std::min(g.hx(), g.hy()) / speed;
}

FullState step_full(const FullState& state, const PhysicalParams& params, double dt,
                    const StepOptions& options) {
  if (!(dt > 0.0)) throw ConfigError("step_full: dt must be positive");
  const double limit = max_stable_dt(state, params);
  if (dt > limit) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "step_full: dt = " << dt << " violates the acoustic CFL bound; admissible dt <= "
        << limit;
    throw ConfigError(msg.str());
  }
  const Grid2D& g = state.pi.grid();
  const Scheme sch(g, state.bc, params, options.kappa);
  const std::size_t n = g.size();

  Fields q0(n);
  for (std::size_t k = 0; k < n; ++k) {
    q0.pi[k] = state.pi[k];
    q0.rho[k] = sch.rho_of(state.pi[k]);
    q0.ux[k] = state.U.x[k];
    q0.uy[k] = state.U.y[k];
  }

  Fields d(n);
  Fields q1 = q0;
  sch.rhs(q0, d);
  for (int j = sch.ay.begin; j < sch.ay.end; ++j) {
    for (int i = sch.ax.begin; i < sch.ax.end; ++i) {
      const std::size_t k = g.index(i, j);
      q1.rho[k] = q0.rho[k] + dt * d.rho[k];
      q1.ux[k] = q0.ux[k] + dt * d.ux[k];
      q1.uy[k] = q0.uy[k] + dt * d.uy[k];
    }
  }
  sch.close(q1, 1, state.t);

  Fields q2 = q1;
  sch.rhs(q1, d);
  for (int j = sch.ay.begin; j < sch.ay.end; ++j) {
    for (int i = sch.ax.begin; i < sch.ax.end; ++i) {
      const std::size_t k = g.index(i, j);
      q2.rho[k] = 0.5 * (q0.rho[k] + q1.rho[k] + dt * d.rho[k]);
      q2.ux[k] = 0.5 * (q0.ux[k] + q1.ux[k] + dt * d.ux[k]);
      q2.uy[k] = 0.5 * (q0.uy[k] + q1.uy[k] + dt * d.uy[k]);
    }
  }
  sch.close(q2, 2, state.t);

  FullState out;
  out.bc = state.bc;
  out.t = state.t + dt;
  out.pi = ScalarField2D(g);
  out.U = VectorField2D(g);
  for (std::size_t k = 0; k < n; ++k) {
    out.pi[k] = q2.pi[k];
    out.U.x[k] = q2.ux[k];
    out.U.y[k] = q2.uy[k];
  }
  return out;
}

LedgerEntry diagnostics(const FullState& state, const PhysicalParams& params) {
  const Grid2D& g = state.pi.grid();
  const std::vector<double> w = trapezoid_weights(g, state.bc);
  const double gm1 = params.gamma() - 1.0;
  LedgerEntry e;
  e.t = state.t;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double rho = params.density_from_pi(state.pi[k]);
    const double u = state.U.x[k];
    const double v = state.U.y[k];
    e.mass += w[k] * rho;
    e.momx += w[k] * rho * u;
    e.momy += w[k] * rho * v;
    e.energy += w[k] * (0.5 * rho * (u * u + v * v) + params.pressure_from_pi(state.pi[k]) / gm1);
  }
  return e;
}

namespace {

// Zero-mean NCC of a and b over nodes where mask is set.
double pearson(const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<char>& mask) {
  double sa = 0.0, sb = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!mask[k]) continue;
    sa += a[k];
    sb += b[k];
    ++n;
  }
  if (n == 0) return 0.0;
  const double ma = sa / n;
  const double mb = sb / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!mask[k]) continue;
    const double da = a[k] - ma;
    const double db = b[k] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (sbb == 0.0) throw NumericalError("pattern_correlation: zero-variance reference");
  if (saa == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

Correlation pattern_correlation(const FullState& state, const ScalarField2D& reference,
                                Vec2 predicted_shift, const CorrelationOptions& options) {
  const Grid2D& g = state.pi.grid();
  require_same_grid(g, reference.grid(), "pattern_correlation");
  const std::size_t n = g.size();
  std::vector<double> a(n);
  for (std::size_t k = 0; k < n; ++k)
    a[k] = state.pi[k] - (options.background.size() == n ? options.background[k] : 0.0);

  Correlation out;
  {
    std::vector<double> b(n, 0.0);
    std::vector<char> mask(n, 0);
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const Vec2 src = g.node(i, j) - predicted_shift;
        if (!g.contains(src)) continue;
        const std::size_t k = g.index(i, j);
        b[k] = sample_bilinear(reference, src);
        mask[k] = b[k] != 0.0 ? 1 : 0;
      }
    }
    out.score = pearson(a, b, mask);
  }

  out.argmax_score = -std::numeric_limits<double>::infinity();
  const int r = options.search_radius;
  std::vector<double> b(n);
  std::vector<char> mask(n);
  for (int sj = -r; sj <= r; ++sj) {
    for (int si = -r; si <= r; ++si) {
      std::fill(b.begin(), b.end(), 0.0);
      std::fill(mask.begin(), mask.end(), 0);
      for (int j = 0; j < g.ny(); ++j) {
        const int rj = j - sj;
        if (rj < 0 || rj >= g.ny()) continue;
        for (int i = 0; i < g.nx(); ++i) {
          const int ri = i - si;
          if (ri < 0 || ri >= g.nx()) continue;
          const std::size_t k = g.index(i, j);
          b[k] = reference(ri, rj);
          mask[k] = b[k] != 0.0 ? 1 : 0;
        }
      }
      const double s = pearson(a, b, mask);
      if (s > out.argmax_score) {
        out.argmax_score = s;
        out.argmax_shift = {si * g.hx(), sj * g.hy()};
      }
    }
  }
  return out;
}

double relative_l2_change(const ScalarField2D& a, const ScalarField2D& b) {
  require_same_grid(a.grid(), b.grid(), "relative_l2_change");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  return std::sqrt(num / den);
}

}  // namespace fpattern
