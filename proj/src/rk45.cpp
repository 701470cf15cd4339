#include "cvmem/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cvmem/special.hpp"

namespace cvmem {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0,     1.0 / 5, 3.0 / 10, 4.0 / 5,
                          8.0 / 9, 1.0,     1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,    0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695,
                           393.0 / 640,       -92097.0 / 339200,
                           187.0 / 2100,      1.0 / 40};

}  // namespace

void integrate_ode(
    const std::function<void(double, const std::vector<double>&,
                             std::vector<double>&)>& rhs,
    std::vector<double> y0, const std::vector<double>& times,
    const std::function<void(double, const std::vector<double>&)>& observer,
    const OdeOptions& opts) {
  if (times.size() < 2) {
    throw std::invalid_argument("integrate_ode: need at least two times");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("integrate_ode: times must increase");
    }
  }

  const std::size_t n = y0.size();
  std::vector<double> y = std::move(y0);
  std::vector<std::vector<double>> k(7, std::vector<double>(n));
  std::vector<double> ytmp(n), ynew(n), yerr(n);

  const double span = times.back() - times.front();
  double t = times.front();
  double h = span / 100.0;
  std::size_t next_out = 0;
  observer(t, y);
  ++next_out;

  std::size_t steps = 0;
  while (next_out < times.size()) {
    const double t_target = times[next_out];
    if (h > t_target - t) h = t_target - t;
    if (h < 1e-14 * span) {
      throw tolerance_error(
          "integrate_ode: step size underflow at t = " + std::to_string(t),
          t);
    }
    if (++steps > opts.max_steps) {
      throw tolerance_error(
          "integrate_ode: exceeded " + std::to_string(opts.max_steps) +
              " steps at t = " + std::to_string(t),
          t);
    }

    rhs(t, y, k[0]);
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
        ytmp[i] = y[i] + h * acc;
      }
      rhs(t + kC[s] * h, ytmp, k[s]);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc5 = 0.0;
      double acc4 = 0.0;
      for (int s = 0; s < 7; ++s) {
        acc5 += kB5[s] * k[s][i];
        acc4 += kB4[s] * k[s][i];
      }
      ynew[i] = y[i] + h * acc5;
      const double scale =
          opts.abs_tol +
          opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = h * (acc5 - acc4) / scale;
      err += e * e;
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      if (t == t_target ||
          std::abs(t - t_target) <= 1e-12 * std::max(1.0, std::abs(t))) {
        t = t_target;
        observer(t, y);
        ++next_out;
      }
    }
    const double factor =
        err > 0.0 ? 0.9 * std::pow(err, -0.2)
                  : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
}

}  // namespace cvmem
