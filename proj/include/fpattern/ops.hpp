#pragma once

#include "fpattern/fields.hpp"

namespace fpattern {

/// Second-order central differences at interior nodes, second-order
/// one-sided (-3, 4, -1) stencils on the boundary.
VectorField2D gradient(const ScalarField2D& f);

/// 5-point stencil in the interior. Boundary nodes use one-sided
/// second-order second differences; they are excluded from residual norms.
ScalarField2D laplacian(const ScalarField2D& f);

struct Hessian {
  ScalarField2D xx;
  ScalarField2D yy;
  ScalarField2D xy;
};

/// Compact 3-point second differences for f_xx, f_yy; f_xy as the central
/// difference of the central difference (same as d/dy of gradient().x).
Hessian hessian(const ScalarField2D& f);

/// J(a, b) = a_x b_y - a_y b_x built from gradient(). Throws ConfigError on
/// grid mismatch.
ScalarField2D jacobian(const ScalarField2D& a, const ScalarField2D& b);

/// u = (Phi_y, -Phi_x).
VectorField2D perp_gradient(const ScalarField2D& phi);

/// Central-difference divergence (one-sided on the boundary).
ScalarField2D divergence(const VectorField2D& v);

/// |v|^2 per node.
ScalarField2D squared_magnitude(const VectorField2D& v);

struct Norms {
  double linf = 0.0;
  double l2 = 0.0;  ///< sqrt(hx*hy*sum f^2)
};

/// Norms over nodes where `excluded` is not set. An empty mask excludes
/// only the boundary ring.
Norms interior_norms(const ScalarField2D& f, const Mask2D& excluded = {});

/// Bilinear interpolation; points outside the grid are clamped to it.
double sample_bilinear(const ScalarField2D& f, Vec2 p);
Vec2 sample_bilinear(const VectorField2D& v, Vec2 p);

/// Anticlockwise line integral of u . dl around a circle, with u sampled
/// bilinearly at `samples` equally spaced points (midpoint rule).
double circulation(const VectorField2D& u, Vec2 center, double radius, int samples = 720);

/// log2(coarse / fine): observed order for a halving of h.
double observed_order(double coarse, double fine);

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

}  // namespace fpattern
