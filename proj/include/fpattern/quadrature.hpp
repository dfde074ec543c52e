#pragma once

#include <functional>

namespace fpattern {

/// Adaptive 15-point Gauss-Kronrod (QAG) integral of f over [a, b]. Throws
/// NumericalError naming the interval when the error estimate does not
/// reach max(abs_tol, rel_tol * |integral|).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 0.0);

/// R1(phi) = integral of R from phi0 to phi.
double antiderivative(const std::function<double(double)>& R, double phi0, double phi,
                      double rel_tol = 1e-10);

}  // namespace fpattern
