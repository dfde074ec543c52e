#include "fpattern/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

#include "fpattern/errors.hpp"

namespace fpattern {

namespace {

constexpr std::size_t kMaxIntervals = 1000;

double trampoline(double x, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(x);
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  static std::once_flag handler_once;
  std::call_once(handler_once, [] { gsl_set_error_handler_off(); });

  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> work(
      gsl_integration_workspace_alloc(kMaxIntervals));
  gsl_function fn{&trampoline, const_cast<std::function<double(double)>*>(&f)};
  double value = 0.0;
  double error = 0.0;
  const double floor = std::max(abs_tol, 1e-15 * std::abs(b - a));
  const int status = gsl_integration_qag(&fn, a, b, floor, rel_tol, kMaxIntervals,
                                         GSL_INTEG_GAUSS15, work.get(), &value, &error);
  if (status != GSL_SUCCESS || !std::isfinite(value)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "quadrature did not converge on [" << a << ", " << b << "]: " << gsl_strerror(status)
        << ", error estimate " << error;
    throw NumericalError(msg.str());
  }
  return value;
}

double antiderivative(const std::function<double(double)>& R, double phi0, double phi,
                      double rel_tol) {
  return integrate_adaptive(R, phi0, phi, rel_tol);
}

}  // namespace fpattern
