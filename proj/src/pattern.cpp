#include "fpattern/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fpattern/errors.hpp"
#include "fpattern/parallel.hpp"
#include "fpattern/quadrature.hpp"

namespace fpattern {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

// Cubic Hermite on [x0, x0 + h] from values and slopes.
double hermite(double t, double h, double f0, double f1, double m0, double m1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * h * m1;
}

void require_inside(const Grid2D& g, double xlo, double xhi, double ylo, double yhi,
                    const char* what) {
  if (!(g.xmin() < xlo && g.xmax() > xhi && g.ymin() < ylo && g.ymax() > yhi)) {
    std::ostringstream msg;
    msg << what << ": support [" << xlo << ", " << xhi << "] x [" << ylo << ", " << yhi
        << "] is not strictly inside the grid bounds";
    throw ConfigError(msg.str());
  }
}

}  // namespace

double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep5_d1(double t) { return 30.0 * t * t * (t - 1.0) * (t - 1.0); }
double smoothstep5_d2(double t) { return 60.0 * t * (2.0 * t - 1.0) * (t - 1.0); }

ProfileSpec quintic_bump(double r0, double amplitude) {
  if (!(r0 > 0.0) || !std::isfinite(r0))
    throw ConfigError("profile: radius r0 must be positive");
  if (amplitude == 0.0 || !std::isfinite(amplitude))
    throw ConfigError("profile: amplitude A must be nonzero");
  const double r2 = r0 * r0;
  ProfileSpec p;
  p.r0 = r0;
  p.amplitude = amplitude;
  p.value = [=](double s) { return s >= r2 ? 0.0 : amplitude * smoothstep5(1.0 - s / r2); };
  p.d1 = [=](double s) {
    return s >= r2 ? 0.0 : -amplitude / r2 * smoothstep5_d1(1.0 - s / r2);
  };
  p.d2 = [=](double s) {
    return s >= r2 ? 0.0 : amplitude / (r2 * r2) * smoothstep5_d2(1.0 - s / r2);
  };
  return p;
}

const char* to_string(PatternKind k) {
  switch (k) {
    case PatternKind::rest: return "rest";
    case PatternKind::axisymmetric: return "axisymmetric";
    case PatternKind::shear: return "shear";
    case PatternKind::sector: return "sector";
  }
  return "?";
}

bool in_sector_wedge(double x1, double x2) {
  // Ties on the rays go to the wedge.
  return x2 >= -kSqrt3 * x1 && x2 <= kSqrt3 * x1;
}

double sector_xi(double x1, double x2) {
  return in_sector_wedge(x1, x2) ? 2.0 * x1 : std::hypot(x1, x2);
}

// ---------------------------------------------------------------------------

Pattern Pattern::rest(const Grid2D& grid) {
  Pattern p;
  p.kind_ = PatternKind::rest;
  p.profile_.r0 = 0.0;
  p.profile_.amplitude = 0.0;
  p.profile_.value = [](double) { return 0.0; };
  p.profile_.d1 = [](double) { return 0.0; };
  p.profile_.d2 = [](double) { return 0.0; };
  p.phi_ = ScalarField2D(grid);
  p.xi_ = ScalarField2D(grid);
  return p;
}

Branch Pattern::default_branch() const {
  return kind_ == PatternKind::shear ? Branch::planar : Branch::radial;
}

Branch Pattern::branch_at(int i, int j) const {
  switch (kind_) {
    case PatternKind::shear: return Branch::planar;
    case PatternKind::sector:
      return sector_mask_(i, j) ? Branch::sector_planar : Branch::radial;
    default: return Branch::radial;
  }
}

double Pattern::F(double xi) const { return profile_.value(xi * xi); }

double Pattern::dF(double xi) const { return 2.0 * xi * profile_.d1(xi * xi); }

double Pattern::d2F(double xi) const {
  const double s = xi * xi;
  return 2.0 * profile_.d1(s) + 4.0 * s * profile_.d2(s);
}

double Pattern::G_of_xi(double xi, Branch b) const {
  const double m = b == Branch::sector_planar ? 4.0 : 1.0;
  const double f1 = dF(xi);
  return m * f1 * f1;
}

double Pattern::R_of_xi(double xi, Branch b) const {
  switch (b) {
    case Branch::radial: {
      // F'' + F'/xi with F'/xi = 2 lambda'(xi^2).
      const double s = xi * xi;
      return 4.0 * profile_.d1(s) + 4.0 * s * profile_.d2(s);
    }
    case Branch::planar: return d2F(xi);
    case Branch::sector_planar: return 4.0 * d2F(xi);
  }
  return 0.0;
}

double Pattern::dG_of_xi(double xi, Branch b) const {
  const double m = b == Branch::sector_planar ? 4.0 : 1.0;
  return 2.0 * m * d2F(xi);
}

const Pattern::R1Table& Pattern::table(Branch b) const {
  switch (b) {
    case Branch::radial: return radial_table_;
    case Branch::planar: return planar_table_;
    case Branch::sector_planar: return sector_table_;
  }
  return radial_table_;
}

void Pattern::build_tables() {
  const double r0 = profile_.r0;
  auto fill = [&](R1Table& t, Branch b) {
    const int n = kR1TableIntervals;
    t.step = r0 / n;
    t.value.assign(n + 1, 0.0);
    t.slope.assign(n + 1, 0.0);
    // dR1/dxi = R(Phi(xi)) * F'(xi); integrate inward from xi = r0 where Phi = 0.
    auto integrand = [this, b](double x) { return R_of_xi(x, b) * dF(x); };
    double scale = 0.0;
    for (int k = 0; k <= n; ++k) {
      t.slope[k] = integrand(k * t.step);
      scale = std::max(scale, std::abs(t.slope[k]));
    }
    // Near r0 the integrand is a small difference of O(1) terms, so a
    // purely relative target would chase roundoff.
    const double floor = 1e-14 * scale * t.step;
    for (int k = n - 1; k >= 0; --k) {
      const double x = k * t.step;
      t.value[k] = t.value[k + 1] - integrate_adaptive(integrand, x, x + t.step, 1e-12, floor);
    }
  };
  switch (kind_) {
    case PatternKind::axisymmetric: fill(radial_table_, Branch::radial); break;
    case PatternKind::shear: fill(planar_table_, Branch::planar); break;
    case PatternKind::sector:
      fill(radial_table_, Branch::radial);
      fill(sector_table_, Branch::sector_planar);
      break;
    case PatternKind::rest: break;
  }
}

double Pattern::R1_of_xi(double xi, Branch b) const {
  if (kind_ == PatternKind::rest) return 0.0;
  const R1Table& t = table(b);
  if (t.value.empty()) throw ConfigError("R1 requested on a branch this pattern does not use");
  if (xi >= profile_.r0) return 0.0;
  const double pos = std::max(xi, 0.0) / t.step;
  const int k = std::min(static_cast<int>(pos), kR1TableIntervals - 1);
  return hermite(pos - k, t.step, t.value[k], t.value[k + 1], t.slope[k], t.slope[k + 1]);
}

double Pattern::xi_of_phi(double phi) const {
  if (kind_ == PatternKind::rest) return 0.0;
  const double a = profile_.amplitude;
  const double lo_phi = std::min(0.0, a);
  const double hi_phi = std::max(0.0, a);
  phi = std::clamp(phi, lo_phi, hi_phi);
  // F(0) = A, F(r0) = 0, monotone in between.
  double lo = 0.0;
  double hi = profile_.r0;
  const double sign = a > 0.0 ? 1.0 : -1.0;
  while (hi - lo > 1e-12 * profile_.r0) {
    const double mid = 0.5 * (lo + hi);
    if (sign * F(mid) > sign * phi)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Mask2D Pattern::discontinuity_band(double band) const {
  if (kind_ != PatternKind::sector) return {};
  const Grid2D& g = grid();
  Mask2D m(g);
  const Vec2 dirs[2] = {{0.5, 0.5 * kSqrt3}, {0.5, -0.5 * kSqrt3}};
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const Vec2 p = g.node(i, j);
      double d = norm(p);
      for (const Vec2& dir : dirs) {
        const double t = dot(p, dir);
        d = std::min(d, t <= 0.0 ? norm(p) : norm(p - t * dir));
      }
      if (d <= band) m.set(i, j, true);
    }
  }
  return m;
}

bool Pattern::outside_support(Vec2 p) const {
  switch (kind_) {
    case PatternKind::rest: return true;
    case PatternKind::axisymmetric: return p.x * p.x + p.y * p.y >= profile_.r0 * profile_.r0;
    case PatternKind::shear: {
      const double c = shear_axis_ == 1 ? p.x : p.y;
      return std::abs(c) >= profile_.r0;
    }
    case PatternKind::sector: return sector_xi(p.x, p.y) >= 1.0;
  }
  return true;
}

// ---------------------------------------------------------------------------

Pattern build_axisymmetric(const ProfileSpec& profile, const Grid2D& grid) {
  const double r0 = profile.r0;
  require_inside(grid, -r0, r0, -r0, r0, "axisymmetric pattern");
  Pattern p;
  p.kind_ = PatternKind::axisymmetric;
  p.profile_ = profile;
  p.xi_ = ScalarField2D::from_function(grid, [](double x, double y) { return std::hypot(x, y); });
  p.phi_ = ScalarField2D::from_function(
      grid, [&](double x, double y) { return profile.value(x * x + y * y); });
  p.build_tables();
  return p;
}

Pattern build_shear(const ProfileSpec& profile, int axis, const Grid2D& grid) {
  if (axis != 1 && axis != 2) throw ConfigError("shear pattern: axis must be 1 or 2");
  const double r0 = profile.r0;
  if (axis == 1 && !(grid.xmin() < -r0 && grid.xmax() > r0))
    throw ConfigError("shear pattern: support [-r0, r0] exceeds the grid along x1");
  if (axis == 2 && !(grid.ymin() < -r0 && grid.ymax() > r0))
    throw ConfigError("shear pattern: support [-r0, r0] exceeds the grid along x2");
  Pattern p;
  p.kind_ = PatternKind::shear;
  p.profile_ = profile;
  p.shear_axis_ = axis;
  p.xi_ = ScalarField2D::from_function(
      grid, [axis](double x, double y) { return std::abs(axis == 1 ? x : y); });
  p.phi_ = ScalarField2D::from_function(grid, [&](double x, double y) {
    const double c = axis == 1 ? x : y;
    return profile.value(c * c);
  });
  p.build_tables();
  return p;
}

Pattern build_sector_vortex(const ProfileSpec& profile, const Grid2D& grid) {
  if (profile.r0 != 1.0) throw ConfigError("sector pattern: profile radius r0 must be 1");
  require_inside(grid, -1.0, 0.5, -1.0, 1.0, "sector pattern");
  // Nodes across Omega_1 at x1 = 1/4: |x2| <= sqrt3/4.
  const double half_width = 0.25 * kSqrt3;
  int across = 0;
  for (int j = 0; j < grid.ny(); ++j)
    if (std::abs(grid.y(j)) <= half_width) ++across;
  if (across < 8)
    throw ConfigError("sector pattern: grid too coarse, " + std::to_string(across) +
                      " nodes across the sector at x1 = 1/4 (need 8)");
  Pattern p;
  p.kind_ = PatternKind::sector;
  p.profile_ = profile;
  p.sector_mask_ = Mask2D(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i)
      if (in_sector_wedge(grid.x(i), grid.y(j))) p.sector_mask_.set(i, j, true);
  p.xi_ = ScalarField2D::from_function(grid, sector_xi);
  p.phi_ = ScalarField2D::from_function(grid, [&](double x, double y) {
    if (in_sector_wedge(x, y)) return profile.value(4.0 * x * x);
    return profile.value(x * x + y * y);
  });
  p.build_tables();
  return p;
}

LiftResult eikonal_lift(const ScalarField2D& xi, const MonotoneFunction& F) {
  const double lo = xi.min();
  const double hi = xi.max();
  constexpr int kSamples = 1024;
  bool pos = false;
  bool neg = false;
  for (int k = 0; k <= kSamples; ++k) {
    const double d = F.derivative(lo + (hi - lo) * k / kSamples);
    pos = pos || d > 0.0;
    neg = neg || d < 0.0;
  }
  if (pos && neg) throw ConfigError("eikonal_lift: F is not monotone on the range of xi");
  if (!pos && !neg) throw ConfigError("eikonal_lift: F is constant on the range of xi");

  LiftResult out;
  out.phi = ScalarField2D(xi.grid());
  for (std::size_t k = 0; k < xi.size(); ++k) out.phi[k] = F.value(xi[k]);
  const double increasing = pos ? 1.0 : -1.0;
  out.G = [F, lo, hi, increasing](double phi) {
    double a = lo;
    double b = hi;
    if (increasing * phi <= increasing * F.value(a)) b = a;
    else if (increasing * phi >= increasing * F.value(b)) a = b;
    while (b - a > 1e-12 * std::max(1.0, std::abs(hi - lo))) {
      const double mid = 0.5 * (a + b);
      if (increasing * F.value(mid) < increasing * phi)
        a = mid;
      else
        b = mid;
    }
    const double d = F.derivative(0.5 * (a + b));
    return d * d;
  };
  return out;
}

}  // namespace fpattern
