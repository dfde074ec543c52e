#pragma once

#include <vector>

#include "fpattern/fields.hpp"
#include "fpattern/physics.hpp"
#include "fpattern/pressure.hpp"

namespace fpattern {

enum class BoundaryKind {
  /// The last node row/column duplicates the first.
  periodic,
  /// Edge values are linearly extrapolated from the two nodes inside.
  extrapolation,
};

/// Fixed-frame state of the pi-U system: pi > 0 and absolute velocity U.
struct FullState {
  ScalarField2D pi;
  VectorField2D U;
  double t = 0.0;
  BoundaryKind bc = BoundaryKind::periodic;
};

/// pi1 = a + g . x.
struct BearingInit {
  double a = 0.0;
  Vec2 g{};
};

/// pi = pi0 + pi1, U = perp_gradient(Phi) + V0. A non-zero g requires the
/// extrapolation boundary. Throws NumericalError naming the minimizing node
/// when pi <= 0 somewhere.
FullState init_full_state(const LocalField& field, BearingInit pi1, Vec2 V0, BoundaryKind bc);

struct StepOptions {
  /// Fourth-difference dissipation coefficient; the added term on every
  /// variable q is -kappa * h^3 * (d4x q / hx^4 + d4y q / hy^4).
  double kappa = 0.05;
};

/// 0.4 min(hx, hy) / max(|U| + sqrt(c0 (gamma - 1) pi)).
double max_stable_dt(const FullState& state, const PhysicalParams& params);

/// One Heun (predictor-corrector) step of
///   U_t + (U.grad)U + l L U + c0 grad pi = 0,
///   rho_t + div(rho U) = 0 with rho = rho(pi),
/// central differences plus dissipation. The mass update is in flux form.
/// Throws ConfigError if dt exceeds max_stable_dt and NumericalError on a
/// non-finite or non-positive state.
FullState step_full(const FullState& state, const PhysicalParams& params, double dt,
                    const StepOptions& options = {});

struct LedgerEntry {
  double t = 0.0;
  double mass = 0.0;
  double momx = 0.0;
  double momy = 0.0;
  double energy = 0.0;  ///< integral of rho |U|^2 / 2 + P / (gamma - 1)
};

/// Composite-trapezoid integrals over the domain.
LedgerEntry diagnostics(const FullState& state, const PhysicalParams& params);

struct CorrelationOptions {
  /// Integer node shifts searched in each direction for the argmax.
  int search_radius = 6;
  /// Subtracted from pi before correlating (e.g. the bearing field); an
  /// empty field subtracts nothing.
  ScalarField2D background;
};

struct Correlation {
  double score = 0.0;  ///< at the predicted shift
  Vec2 argmax_shift{};
  double argmax_score = 0.0;
};

/// Zero-mean normalized cross-correlation between pi(t) - background and
/// the reference translated by predicted_shift, over the translated
/// reference's support. Throws NumericalError for a zero-variance reference.
Correlation pattern_correlation(const FullState& state, const ScalarField2D& reference,
                                Vec2 predicted_shift, const CorrelationOptions& options = {});

/// Relative L2 change ||a - b|| / ||b|| over the grid.
double relative_l2_change(const ScalarField2D& a, const ScalarField2D& b);

}  // namespace fpattern
