#include "fpattern/physics.hpp"

#include <cmath>

#include "fpattern/errors.hpp"

namespace fpattern {

PhysicalParams PhysicalParams::make(double gamma, double C, double l) {
  if (!(gamma > 1.0 && gamma <= 2.0))
    throw ConfigError("physics: gamma must lie in (1, 2]");
  if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("physics: C must be positive");
  if (!(l > 0.0) || !std::isfinite(l))
    throw ConfigError("physics: Coriolis parameter l must be positive");
  PhysicalParams p;
  p.gamma_ = gamma;
  p.C_ = C;
  p.l_ = l;
  p.c0_ = compute_c0(gamma, C);
  return p;
}

double PhysicalParams::compute_c0(double gamma, double C) {
  return gamma / (gamma - 1.0) * std::pow(C, 1.0 / gamma);
}

double PhysicalParams::pressure_from_density(double rho) const {
  return C_ * std::pow(rho, gamma_);
}

double PhysicalParams::pi_from_pressure(double P) const {
  return std::pow(P, (gamma_ - 1.0) / gamma_);
}

double PhysicalParams::pressure_from_pi(double pi) const {
  return std::pow(pi, gamma_ / (gamma_ - 1.0));
}

double PhysicalParams::density_from_pi(double pi) const {
  return std::pow(C_, -1.0 / gamma_) * std::pow(pi, 1.0 / (gamma_ - 1.0));
}

}  // namespace fpattern
