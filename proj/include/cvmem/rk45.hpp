#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cvmem {

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  std::size_t max_steps = 2000000;
};

/// Integrates y' = rhs(t, y) with an adaptive Dormand-Prince 5(4) embedded
/// pair from times.front() to times.back(), calling observer(t, y) at every
/// entry of `times` (strictly increasing; the first entry is the initial
/// time, at which the observer also fires). Steps are clamped so requested
/// times are hit exactly. Throws tolerance_error when the step size
/// underflows or max_steps is exhausted — the usual signature of a stiff or
/// under-resolved problem at the requested tolerance.
void integrate_ode(
    const std::function<void(double, const std::vector<double>&,
                             std::vector<double>&)>& rhs,
    std::vector<double> y0, const std::vector<double>& times,
    const std::function<void(double, const std::vector<double>&)>& observer,
    const OdeOptions& opts = {});

}  // namespace cvmem
