#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cvmem {

/// A real temporal mode sampled on a strictly increasing grid, linearly
/// interpolated between nodes and zero outside. An optional continuous
/// evaluator can be attached when the analytic form is known; quadrature
/// routines prefer it over interpolation.
struct TemporalMode {
  std::vector<double> grid;
  std::vector<double> values;
  std::function<double(double)> eval;  // optional continuous extension

  bool has_eval() const { return static_cast<bool>(eval); }

  /// Value at t: the continuous evaluator if attached, otherwise linear
  /// interpolation on the grid (zero outside the grid span).
  double operator()(double t) const;

  /// Interpolated value only (ignores the evaluator).
  double interp(double t) const;
};

/// Builds a validated mode from samples; throws std::invalid_argument on a
/// non-increasing grid, size mismatch, or non-finite values.
TemporalMode make_mode(std::vector<double> grid, std::vector<double> values);

/// Samples f on the grid and attaches it as the continuous evaluator.
TemporalMode sample_mode(const std::function<double(double)>& f,
                         std::vector<double> grid);

/// n evenly spaced points from a to b inclusive (n >= 2).
std::vector<double> linspace(double a, double b, std::size_t n);

/// n logarithmically spaced points from a to b inclusive (0 < a < b, n >= 2).
std::vector<double> logspace(double a, double b, std::size_t n);

/// Trapezoidal sum of the sampled values over their grid.
double trapezoid(const std::vector<double>& grid,
                 const std::vector<double>& values);

}  // namespace cvmem
