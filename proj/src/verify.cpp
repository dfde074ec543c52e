#include "fpattern/verify.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

#include "fpattern/errors.hpp"
#include "fpattern/parallel.hpp"

namespace fpattern {

Mask2D admissible_exclusions(const Pattern& pattern, const ResidualOptions& options) {
  const Grid2D& g = pattern.grid();
  Mask2D ex = boundary_ring(g);
  if (pattern.kind() == PatternKind::sector && options.exclude_discontinuities) {
    const Mask2D band = pattern.discontinuity_band(options.band_cells * g.h());
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (band(i, j)) ex.set(i, j, true);
  }
  return ex;
}

Norms dubreil_jacotin_residual(const LocalField& field, const PhysicalParams& params,
                               const Mask2D& excluded) {
  const Pattern& pat = *field.pattern;
  const Grid2D& g = pat.grid();
  if (!(field.pi0.min() > 0.0))
    throw NumericalError("dubreil_jacotin_residual: pi0 must be positive everywhere");
  const ScalarField2D& phi = pat.phi();
  const ScalarField2D lap = laplacian(phi);
  const ScalarField2D grad_sq = squared_magnitude(gradient(phi));
  const double gm1 = params.gamma() - 1.0;
  const double c0 = params.c0();
  const double l = params.l();

  ScalarField2D w(g);
  parallel_rows(g.ny(), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < g.nx(); ++i) {
      const double dpi0 = -(pat.dG_at(i, j) - 2.0 * pat.R_at(i, j) + 2.0 * l) / (2.0 * c0);
      w(i, j) = lap(i, j) + dpi0 * grad_sq(i, j) / (2.0 * gm1 * field.pi0(i, j));
    }
  });
  return interior_norms(jacobian(phi, w), excluded);
}

ResidualReport residual_report(const LocalField& field, const PhysicalParams& params,
                               const ResidualOptions& options) {
  const Pattern& pat = *field.pattern;
  const Grid2D& g = pat.grid();
  const ScalarField2D& phi = pat.phi();

  ResidualReport rep;
  rep.h = g.h();
  rep.excluded = admissible_exclusions(pat, options);
  rep.excluded_count = rep.excluded.count();
  auto set = [&](Residual r, const ScalarField2D& f) {
    rep.entries[static_cast<std::size_t>(r)] = interior_norms(f, rep.excluded);
  };

  const VectorField2D grad = gradient(phi);
  const ScalarField2D grad_sq = squared_magnitude(grad);
  const ScalarField2D lap = laplacian(phi);

  ScalarField2D eik(g), poi(g);
  parallel_rows(g.ny(), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < g.nx(); ++i) {
      const Branch b = pat.branch_at(i, j);
      eik(i, j) = grad_sq(i, j) - pat.G(phi(i, j), b);
      poi(i, j) = lap(i, j) - pat.R(phi(i, j), b);
    }
  });
  set(Residual::eikonal, eik);
  set(Residual::poisson, poi);
  set(Residual::jacobian_master, jacobian(phi, grad_sq));
  set(Residual::jacobian_vorticity, jacobian(phi, lap));

  const VectorField2D& u = field.u;
  const VectorField2D gux = gradient(u.x);
  const VectorField2D guy = gradient(u.y);
  const VectorField2D gpi = gradient(field.pi0);
  const double l = params.l();
  const double c0 = params.c0();
  ScalarField2D mx(g), my(g), orth(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    // L u = (-u_y, u_x)
    mx[k] = u.x[k] * gux.x[k] + u.y[k] * gux.y[k] - l * u.y[k] + c0 * gpi.x[k];
    my[k] = u.x[k] * guy.x[k] + u.y[k] * guy.y[k] + l * u.x[k] + c0 * gpi.y[k];
    orth[k] = gpi.x[k] * u.x[k] + gpi.y[k] * u.y[k];
  }
  const Norms nx = interior_norms(mx, rep.excluded);
  const Norms ny = interior_norms(my, rep.excluded);
  rep.entries[static_cast<std::size_t>(Residual::momentum)] = {std::max(nx.linf, ny.linf),
                                                              std::max(nx.l2, ny.l2)};
  set(Residual::orthogonality, orth);
  rep.entries[static_cast<std::size_t>(Residual::dubreil_jacotin)] =
      dubreil_jacotin_residual(field, params, rep.excluded);
  return rep;
}

StabilityResult check_stability_class(const ScalarField2D& phi, double C_bound,
                                      const Mask2D& excluded) {
  const Grid2D& g = phi.grid();
  const bool use_mask = !excluded.empty();
  constexpr int kDirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  StabilityResult res;
  res.min_value = std::numeric_limits<double>::infinity();
  for (int j = 1; j < g.ny() - 1; ++j) {
    for (int i = 1; i < g.nx() - 1; ++i) {
      if (use_mask && excluded(i, j)) continue;
      for (const auto& d : kDirs) {
        const double dx = d[0] * g.hx();
        const double dy = d[1] * g.hy();
        const double v = (phi(i + d[0], j + d[1]) - 2.0 * phi(i, j) + phi(i - d[0], j - d[1])) /
                         (dx * dx + dy * dy);
        if (v < res.min_value) {
          res.min_value = v;
          res.i = i;
          res.j = j;
          res.di = d[0];
          res.dj = d[1];
        }
      }
    }
  }
  res.pass = res.min_value >= -C_bound;
  return res;
}

double analytic_stability_bound(const Pattern& pattern) {
  if (pattern.kind() == PatternKind::rest) return 0.0;
  const ProfileSpec& p = pattern.profile();
  const double r2 = p.r0 * p.r0;
  constexpr int kSamples = 20000;
  double worst = 0.0;
  for (int k = 0; k <= kSamples; ++k) {
    const double s = r2 * k / kSamples;
    const double a = 2.0 * p.d1(s);                  // Hessian eigenvalue along the level set
    const double b = 2.0 * p.d1(s) + 4.0 * s * p.d2(s);  // along grad xi (= F'')
    switch (pattern.kind()) {
      case PatternKind::axisymmetric:
      case PatternKind::sector: worst = std::max({worst, std::abs(a), std::abs(b)}); break;
      case PatternKind::shear: worst = std::max(worst, std::abs(b)); break;
      default: break;
    }
    if (pattern.kind() == PatternKind::sector) worst = std::max(worst, 4.0 * std::abs(b));
  }
  return 2.0 * worst;
}

}  // namespace fpattern
