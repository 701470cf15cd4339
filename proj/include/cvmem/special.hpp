#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace cvmem {

/// Thrown when an adaptive numerical routine (quadrature, ODE stepping)
/// cannot reach the requested tolerance. Carries the best estimate achieved
/// so callers can decide whether it is still usable.
class tolerance_error : public std::runtime_error {
 public:
  tolerance_error(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  /// Best estimate of the requested quantity at the point of failure.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Error function; thin wrapper so all call sites share one entry point.
inline double erf(double x) { return std::erf(x); }

/// Principal branch W0 of the Lambert W function: w such that w*exp(w) = x,
/// with w >= -1. Domain x >= -1/e; throws std::domain_error outside.
/// Relative accuracy ~1e-14 away from the branch point, absolute ~1e-7 at it.
double lambert_w0(double x);

/// Adaptive Gauss-Kronrod 7/15 quadrature of f over [lo, hi]. Either endpoint
/// may be infinite (mapped to a finite interval by rational substitution).
/// Throws tolerance_error when the error estimate cannot be brought below
/// rel_tol * |integral| within max_depth bisection levels.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-10, int max_depth = 60);

}  // namespace cvmem
