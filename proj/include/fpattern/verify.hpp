#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "fpattern/fields.hpp"
#include "fpattern/ops.hpp"
#include "fpattern/physics.hpp"
#include "fpattern/pressure.hpp"

namespace fpattern {

enum class Residual : std::size_t {
  eikonal,             ///< |grad Phi|^2 - G(Phi)
  poisson,             ///< lap Phi - R(Phi)
  jacobian_master,     ///< J(Phi, |grad Phi|^2)
  jacobian_vorticity,  ///< J(Phi, lap Phi)
  momentum,            ///< (u.grad)u + l L u + c0 grad pi0
  orthogonality,       ///< grad pi0 . perp_grad Phi
  dubreil_jacotin,     ///< J(Phi, W)
};

inline constexpr std::size_t kResidualCount = 7;
inline constexpr std::array<std::string_view, kResidualCount> kResidualNames = {
    "eikonal",  "poisson",       "jacobian_master", "jacobian_vorticity",
    "momentum", "orthogonality", "dubreil_jacotin"};

struct ResidualReport {
  std::array<Norms, kResidualCount> entries{};
  Mask2D excluded;
  std::size_t excluded_count = 0;
  double h = 0.0;

  const Norms& operator[](Residual r) const { return entries[static_cast<std::size_t>(r)]; }
};

struct ResidualOptions {
  /// Drop nodes within band_cells * h of the sector rays and the origin.
  bool exclude_discontinuities = true;
  double band_cells = 3.0;
};

/// Boundary ring plus, for sector patterns, the discontinuity band.
Mask2D admissible_exclusions(const Pattern& pattern, const ResidualOptions& options);

ResidualReport residual_report(const LocalField& field, const PhysicalParams& params,
                               const ResidualOptions& options = {});

/// Norms of J(Phi, W), W = lap Phi + pi0'(Phi) |grad Phi|^2 / (2 (gamma-1) pi0),
/// with pi0'(Phi) = -(G'(Phi) - 2 R(Phi) + 2 l) / (2 c0). Throws NumericalError
/// if pi0 <= 0 anywhere.
Norms dubreil_jacotin_residual(const LocalField& field, const PhysicalParams& params,
                               const Mask2D& excluded = {});

struct StabilityResult {
  bool pass = true;
  double min_value = 0.0;  ///< smallest normalized second difference
  int i = -1;              ///< witness node
  int j = -1;
  int di = 0;  ///< witness direction, in node steps
  int dj = 0;
};

/// Minimum over interior nodes of (f(x+d) - 2f(x) + f(x-d)) / |d|^2 for
/// d in {(h,0), (0,h), (h,h), (h,-h)}; passes iff min >= -C_bound.
StabilityResult check_stability_class(const ScalarField2D& phi, double C_bound,
                                      const Mask2D& excluded = {});

/// 2 * max |second directional derivative| of Phi from the analytic profile.
double analytic_stability_bound(const Pattern& pattern);

}  // namespace fpattern
