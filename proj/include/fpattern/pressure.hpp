#pragma once

#include <memory>

#include "fpattern/fields.hpp"
#include "fpattern/pattern.hpp"
#include "fpattern/physics.hpp"

namespace fpattern {

/// Local field (u, pi0) of a frozen pattern.
struct LocalField {
  std::shared_ptr<const Pattern> pattern;
  ScalarField2D pi0;
  VectorField2D u;  ///< perp_gradient(Phi)
  double pi_ambient = 1.0;
};

enum class GradientSource { analytic, finite_difference };

/// R1(phi) = integral of R from Phi0 = 0 to phi by adaptive quadrature
/// (no table), for the given branch. phi must lie in the range of Phi.
double antiderivative_R1(const Pattern& pattern, double phi, Branch branch);

/// pi0 = -(|grad Phi|^2 - 2 R1(Phi) + 2 l Phi) / (2 c0) + pi_ambient.
/// |grad Phi|^2 comes from G(Phi) (analytic) or from finite differences.
/// Throws NumericalError if min pi0 <= 0.
LocalField reconstruct_pi0(std::shared_ptr<const Pattern> pattern, const PhysicalParams& params,
                           double pi_ambient,
                           GradientSource source = GradientSource::analytic);

enum class PathOrder { x_then_y, y_then_x };

struct PathIntegral {
  ScalarField2D pi0;
  /// Nodes whose integration path crosses an excluded node.
  Mask2D flagged;
  bool approximate = false;
};

/// pi0 by trapezoidal line integration of
///   d(pi0)/dx1 = -(Phi_2 Phi_12 - Phi_1 Phi_22 + l Phi_1) / c0,
///   d(pi0)/dx2 = -(-Phi_2 Phi_11 + Phi_1 Phi_12 + l Phi_2) / c0
/// along axis-aligned staircase paths from node (0, 0), where pi0 = pi_ambient.
PathIntegral pi0_path_integral(const ScalarField2D& phi, const PhysicalParams& params,
                               double pi_ambient, PathOrder order = PathOrder::x_then_y,
                               const Mask2D& excluded = {});

/// rho = C^(-1/gamma) pi^(1/(gamma-1)). Throws NumericalError on a negative
/// entry, naming the node.
ScalarField2D density_from_pi(const ScalarField2D& pi, const PhysicalParams& params);

}  // namespace fpattern
