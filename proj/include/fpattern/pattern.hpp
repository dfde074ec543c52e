#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fpattern/fields.hpp"

namespace fpattern {

/// Radial profile lambda(s), s = xi^2, supported on [0, r0^2].
struct ProfileSpec {
  double r0 = 1.0;
  double amplitude = 0.0;
  std::function<double(double)> value;  ///< lambda(s)
  std::function<double(double)> d1;     ///< lambda'(s)
  std::function<double(double)> d2;     ///< lambda''(s)
};

/// lambda(s) = A * S5(1 - s/r0^2) with S5(t) = 6t^5 - 15t^4 + 10t^3 and
/// lambda = 0 for s > r0^2. Vanishes with its first two derivatives at
/// s = r0^2; first two derivatives also vanish at s = 0.
ProfileSpec quintic_bump(double r0, double amplitude);

/// Smoothstep polynomial and its derivatives, exposed for tests.
double smoothstep5(double t);
double smoothstep5_d1(double t);
double smoothstep5_d2(double t);

enum class PatternKind { rest, axisymmetric, shear, sector };

/// How the eikonal field xi varies on a set of nodes.
///  radial:        xi = |x|,        |grad xi|^2 = 1, lap xi = 1/xi
///  planar:        xi = |x_axis|,   |grad xi|^2 = 1, lap xi = 0
///  sector_planar: xi = 2 x_1,      |grad xi|^2 = 4, lap xi = 0
enum class Branch { radial, planar, sector_planar };

const char* to_string(PatternKind k);

/// A stream function Phi = F(xi), F(xi) = lambda(xi^2), with the functions
/// G, R of |grad Phi|^2 = G(Phi) and lap Phi = R(Phi), and the antiderivative
/// R1 of R from Phi0 = 0. Immutable once built.
class Pattern {
 public:
  PatternKind kind() const { return kind_; }
  const ProfileSpec& profile() const { return profile_; }
  const Grid2D& grid() const { return phi_.grid(); }
  const ScalarField2D& phi() const { return phi_; }
  const ScalarField2D& xi() const { return xi_; }
  /// chi(Omega_1) for sector patterns; empty otherwise.
  const Mask2D& sector_mask() const { return sector_mask_; }
  int shear_axis() const { return shear_axis_; }

  Branch branch_at(int i, int j) const;

  // F and its xi-derivatives.
  double F(double xi) const;
  double dF(double xi) const;
  double d2F(double xi) const;

  // Branch functions of xi.
  double G_of_xi(double xi, Branch b) const;
  double R_of_xi(double xi, Branch b) const;
  double dG_of_xi(double xi, Branch b) const;  ///< dG/dPhi
  double R1_of_xi(double xi, Branch b) const;

  /// Monotone inversion of Phi = F(xi) on [0, r0]; Phi outside the range
  /// of F clamps to the nearest endpoint.
  double xi_of_phi(double phi) const;
  double G(double phi, Branch b) const { return G_of_xi(xi_of_phi(phi), b); }
  double R(double phi, Branch b) const { return R_of_xi(xi_of_phi(phi), b); }
  double R1(double phi, Branch b) const { return R1_of_xi(xi_of_phi(phi), b); }

  /// Branch default for the pattern kind (radial for sector).
  Branch default_branch() const;

  // Node-wise evaluations through the stored xi (no inversion).
  double G_at(int i, int j) const { return G_of_xi(xi_(i, j), branch_at(i, j)); }
  double R_at(int i, int j) const { return R_of_xi(xi_(i, j), branch_at(i, j)); }
  double dG_at(int i, int j) const { return dG_of_xi(xi_(i, j), branch_at(i, j)); }
  double R1_at(int i, int j) const { return R1_of_xi(xi_(i, j), branch_at(i, j)); }

  /// Nodes farther than `band` from the sector rays and the origin are
  /// admissible; other kinds return an empty mask.
  Mask2D discontinuity_band(double band) const;

  /// Closed-form support test: true where Phi vanishes identically together
  /// with its gradient (outside Omega).
  bool outside_support(Vec2 p) const;

  static Pattern rest(const Grid2D& grid);

 private:
  friend Pattern build_axisymmetric(const ProfileSpec&, const Grid2D&);
  friend Pattern build_shear(const ProfileSpec&, int, const Grid2D&);
  friend Pattern build_sector_vortex(const ProfileSpec&, const Grid2D&);

  struct R1Table {
    double step = 0.0;
    std::vector<double> value;  // R1 at xi_k = k * step
    std::vector<double> slope;  // dR1/dxi = R * F'
  };

  void build_tables();
  const R1Table& table(Branch b) const;

  PatternKind kind_ = PatternKind::rest;
  ProfileSpec profile_{};
  ScalarField2D phi_;
  ScalarField2D xi_;
  Mask2D sector_mask_;
  int shear_axis_ = 1;
  R1Table radial_table_;
  R1Table planar_table_;
  R1Table sector_table_;
};

inline constexpr int kR1TableIntervals = 2048;

/// Phi = lambda(x1^2 + x2^2). Requires the disc of radius r0 strictly
/// inside the grid.
Pattern build_axisymmetric(const ProfileSpec& profile, const Grid2D& grid);

/// Phi = lambda(x_axis^2), axis in {1, 2}.
Pattern build_shear(const ProfileSpec& profile, int axis, const Grid2D& grid);

/// Discontinuous vortex on Omega = {|x| < 1, x1 < 1/2}: xi = 2 x1 on the
/// wedge Omega_1 = {-sqrt3 x1 <= x2 <= sqrt3 x1}, xi = |x| elsewhere.
Pattern build_sector_vortex(const ProfileSpec& profile, const Grid2D& grid);

/// Closed-form eikonal field of the sector vortex.
double sector_xi(double x1, double x2);
bool in_sector_wedge(double x1, double x2);

struct MonotoneFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

struct LiftResult {
  ScalarField2D phi;
  /// G(Phi) = F'(F^{-1}(Phi))^2.
  std::function<double(double)> G;
};

/// Phi = F(xi) for a unit-eikonal xi. Throws ConfigError when F' changes
/// sign on the sampled range of xi.
LiftResult eikonal_lift(const ScalarField2D& xi, const MonotoneFunction& F);

}  // namespace fpattern
