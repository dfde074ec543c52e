#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fpattern/fields.hpp"
#include "fpattern/physics.hpp"

namespace fpattern {

/// Bearing field pi1 in the local frame plus the frame centre X and its
/// velocity V at time t.
struct BearingState {
  ScalarField2D pi1;
  Vec2 X{};
  Vec2 V{};
  double t = 0.0;
};

/// Semi-Lagrangian transport of pi1 by u = perp_gradient(phi): feet are
/// traced back one dt with the midpoint rule through bilinear u, then pi1
/// is interpolated bilinearly (a convex combination, so the range never
/// grows). Feet leaving the grid sample the initial pi1 at the clamped
/// position. Nodes with zero displacement keep their value bit for bit.
/// Throws NumericalError with the step index on non-finite values.
BearingState advect_pi1(const BearingState& state, const ScalarField2D& phi, double dt, int steps);

/// Same, with a prescribed steady velocity field.
BearingState advect_pi1(const BearingState& state, const VectorField2D& u, double dt, int steps);

/// max over interior nodes of |grad pi1|.
double sup_grad_norm(const ScalarField2D& pi1);

/// Q = -c0 (grad pi1(x) - grad pi1(0)); grad pi1(0) is bilinearly
/// interpolated. Throws ConfigError if the origin is off the grid.
VectorField2D discrepancy_Q(const ScalarField2D& pi1, const PhysicalParams& params);

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec2> X;
  std::vector<Vec2> V;
  double dt = 0.0;
  std::string scheme = "rk4";
};

/// g(t) = grad pi1(t, 0).
using GradientHistory = std::function<Vec2(double)>;

/// Classical RK4 for X' = V, V' = -l L V - c0 g(t). When T is not a whole
/// number of steps, the step is shortened so that it is (reported in dt).
/// Throws NumericalError with the time stamp on a non-finite state.
Trajectory integrate_center(Vec2 X0, Vec2 V0, const GradientHistory& g,
                            const PhysicalParams& params, double dt, double T);

/// Geostrophic drift V* = (c0 / l) L g for a constant bearing gradient g.
Vec2 geostrophic_drift(Vec2 g, const PhysicalParams& params);

/// Exact state at time t for constant g: V = V* + rot(-l t)(V0 - V*),
/// an inertial circle of period 2 pi / l about the drift.
struct CenterState {
  Vec2 X;
  Vec2 V;
};
CenterState constant_gradient_solution(Vec2 X0, Vec2 V0, Vec2 g, const PhysicalParams& params,
                                       double t);

}  // namespace fpattern
