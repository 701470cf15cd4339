#include "cvmem/temporal_mode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvmem {

double TemporalMode::interp(double t) const {
  if (grid.empty() || t < grid.front() || t > grid.back()) return 0.0;
  if (t == grid.front()) return values.front();
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  if (it == grid.end()) return values.back();
  const std::size_t i = static_cast<std::size_t>(it - grid.begin());
  const double w = (t - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + w * (values[i] - values[i - 1]);
}

double TemporalMode::operator()(double t) const {
  return eval ? eval(t) : interp(t);
}

TemporalMode make_mode(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() < 2 || grid.size() != values.size()) {
    throw std::invalid_argument("make_mode: need >= 2 nodes, matching sizes");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("make_mode: non-finite node");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("make_mode: grid must be strictly increasing");
    }
  }
  TemporalMode m;
  m.grid = std::move(grid);
  m.values = std::move(values);
  return m;
}

TemporalMode sample_mode(const std::function<double(double)>& f,
                         std::vector<double> grid) {
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
  TemporalMode m = make_mode(std::move(grid), std::move(vals));
  m.eval = f;
  return m;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2 || !(a < b)) {
    throw std::invalid_argument("linspace: need n >= 2 and a < b");
  }
  std::vector<double> g(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + h * static_cast<double>(i);
  g.back() = b;
  return g;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > a) || n < 2) {
    throw std::invalid_argument("logspace: need 0 < a < b and n >= 2");
  }
  std::vector<double> g = linspace(std::log(a), std::log(b), n);
  for (double& x : g) x = std::exp(x);
  g.front() = a;
  g.back() = b;
  return g;
}

double trapezoid(const std::vector<double>& grid,
                 const std::vector<double>& values) {
  if (grid.size() != values.size() || grid.size() < 2) {
    throw std::invalid_argument("trapezoid: need >= 2 matching samples");
  }
  double s = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    s += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return s;
}

}  // namespace cvmem
