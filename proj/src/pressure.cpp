#include "fpattern/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fpattern/errors.hpp"
#include "fpattern/ops.hpp"
#include "fpattern/parallel.hpp"
#include "fpattern/quadrature.hpp"

namespace fpattern {

double antiderivative_R1(const Pattern& pattern, double phi, Branch branch) {
  if (pattern.kind() == PatternKind::rest) return 0.0;
  const double a = pattern.profile().amplitude;
  if (phi < std::min(0.0, a) || phi > std::max(0.0, a))
    throw ConfigError("antiderivative_R1: phi outside the pattern's range");
  if (phi == 0.0) return 0.0;
  // Substituting eta = F(x) turns the Phi integral into one over xi, where
  // the integrand R(F(x)) F'(x) is smooth.
  const double xi = pattern.xi_of_phi(phi);
  return integrate_adaptive(
      [&](double x) { return pattern.R_of_xi(x, branch) * pattern.dF(x); },
      pattern.profile().r0, xi, 1e-10);
}

LocalField reconstruct_pi0(std::shared_ptr<const Pattern> pattern, const PhysicalParams& params,
                           double pi_ambient, GradientSource source) {
  if (!(pi_ambient > 0.0)) throw ConfigError("pressure: pi_ambient must be positive");
  const Pattern& pat = *pattern;
  const Grid2D& g = pat.grid();
  LocalField out;
  out.pattern = pattern;
  out.pi_ambient = pi_ambient;
  out.u = perp_gradient(pat.phi());
  out.pi0 = ScalarField2D(g, pi_ambient);
  if (pat.kind() == PatternKind::rest) return out;

  ScalarField2D grad_sq;
  if (source == GradientSource::finite_difference) grad_sq = squared_magnitude(gradient(pat.phi()));

  const double l = params.l();
  const double c0 = params.c0();
  parallel_rows(g.ny(), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < g.nx(); ++i) {
      const double phi = pat.phi()(i, j);
      const double gs = source == GradientSource::analytic ? pat.G_at(i, j) : grad_sq(i, j);
      out.pi0(i, j) = pi_ambient - (gs - 2.0 * pat.R1_at(i, j) + 2.0 * l * phi) / (2.0 * c0);
    }
  });

  const auto it = std::min_element(out.pi0.values().begin(), out.pi0.values().end());
  if (!(*it > 0.0)) {
    const auto k = static_cast<std::size_t>(it - out.pi0.values().begin());
    std::ostringstream msg;
    msg << "pressure: pi0 = " << *it << " <= 0 at node (" << k % g.nx() << ", " << k / g.nx()
        << "); increase pi_ambient";
    throw NumericalError(msg.str());
  }
  return out;
}

PathIntegral pi0_path_integral(const ScalarField2D& phi, const PhysicalParams& params,
                               double pi_ambient, PathOrder order, const Mask2D& excluded) {
  const Grid2D& g = phi.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const double l = params.l();
  const VectorField2D d = gradient(phi);
  const Hessian hs = hessian(phi);

  // Integrands of d(c0 pi0) along x1 and x2, with the sign folded in.
  ScalarField2D ix(g), iy(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    ix[k] = d.y[k] * hs.xy[k] - d.x[k] * hs.yy[k] + l * d.x[k];
    iy[k] = -d.y[k] * hs.xx[k] + d.x[k] * hs.xy[k] + l * d.y[k];
  }

  // Running trapezoid sums along rows (cx) and columns (cy) from index 0.
  ScalarField2D cx(g), cy(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      cx(i, j) = cx(i - 1, j) + 0.5 * g.hx() * (ix(i - 1, j) + ix(i, j));
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j)
      cy(i, j) = cy(i, j - 1) + 0.5 * g.hy() * (iy(i, j - 1) + iy(i, j));

  PathIntegral out;
  out.pi0 = ScalarField2D(g);
  out.flagged = Mask2D(g);
  const bool use_mask = !excluded.empty();
  const double c0 = params.c0();

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double integral = order == PathOrder::x_then_y ? cx(i, 0) + cy(i, j)
                                                           : cy(0, j) + cx(i, j);
      out.pi0(i, j) = pi_ambient - integral / c0;
    }
  }

  if (use_mask) {
    // Prefix flags: first leg along the edge, second leg along the column/row.
    std::vector<char> edge(order == PathOrder::x_then_y ? nx : ny, 0);
    if (order == PathOrder::x_then_y) {
      for (int i = 0; i < nx; ++i) edge[i] = (i > 0 && edge[i - 1]) || excluded(i, 0);
      for (int i = 0; i < nx; ++i) {
        bool hit = edge[i];
        for (int j = 0; j < ny; ++j) {
          hit = hit || excluded(i, j);
          out.flagged.set(i, j, hit);
        }
      }
    } else {
      for (int j = 0; j < ny; ++j) edge[j] = (j > 0 && edge[j - 1]) || excluded(0, j);
      for (int j = 0; j < ny; ++j) {
        bool hit = edge[j];
        for (int i = 0; i < nx; ++i) {
          hit = hit || excluded(i, j);
          out.flagged.set(i, j, hit);
        }
      }
    }
    out.approximate = out.flagged.count() > 0;
  }
  return out;
}

ScalarField2D density_from_pi(const ScalarField2D& pi, const PhysicalParams& params) {
  const Grid2D& g = pi.grid();
  ScalarField2D rho(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double v = pi(i, j);
      if (v < 0.0 || std::isnan(v)) {
        std::ostringstream msg;
        msg << "density_from_pi: pi = " << v << " < 0 at node (" << i << ", " << j << ")";
        throw NumericalError(msg.str());
      }
      rho(i, j) = params.density_from_pi(v);
    }
  }
  return rho;
}

}  // namespace fpattern
