#pragma once

#include "fpattern/fields.hpp"

namespace fpattern {

/// Barotropic model constants: P = C rho^gamma, Coriolis term l L U, and
/// c0 = gamma/(gamma-1) C^(1/gamma) multiplying grad pi, pi = P^((gamma-1)/gamma).
class PhysicalParams {
 public:
  /// Throws ConfigError unless 1 < gamma <= 2, C > 0, l > 0.
  static PhysicalParams make(double gamma, double C, double l);

  double gamma() const { return gamma_; }
  double C() const { return C_; }
  double l() const { return l_; }
  double c0() const { return c0_; }

  static double compute_c0(double gamma, double C);

  // Pointwise conversions between rho, P and pi.
  double pressure_from_density(double rho) const;
  double pi_from_pressure(double P) const;
  double pressure_from_pi(double pi) const;
  double density_from_pi(double pi) const;
  /// Squared sound speed in the pi-U system: c0 (gamma - 1) pi.
  double sound_speed_sq(double pi) const { return c0_ * (gamma_ - 1.0) * pi; }

 private:
  double gamma_ = 1.5;
  double C_ = 1.0;
  double l_ = 1.0;
  double c0_ = 3.0;
};

}  // namespace fpattern
