#pragma once

#include <utility>
#include <vector>

namespace cvmem {

enum class ShapeKind { gaussian, step, constant, sampled };

/// Dimensionless drive envelope xi(t) >= 0.
///
/// gaussian:  xi(t) = exp(-t^2/T^2) / sqrt(pi)   (unit time integral, T > 0)
/// step:      xi(t) = 1 for t >= onset, else 0
/// constant:  xi(t) = 1 everywhere
/// sampled:   linear interpolation through (times, values), 0 outside
class PulseShape {
 public:
  static PulseShape gaussian(double duration);
  static PulseShape step(double onset = 0.0);
  static PulseShape constant();
  static PulseShape sampled(std::vector<double> times,
                            std::vector<double> values);

  ShapeKind kind() const noexcept { return kind_; }
  /// Gaussian width T; throws std::logic_error for other kinds.
  double duration() const;
  /// Step onset time; throws std::logic_error for other kinds.
  double onset() const;

  /// Envelope value xi(t).
  double value(double t) const;
  double operator()(double t) const { return value(t); }

  /// Maximum of xi over all t.
  double peak() const;

  /// Interval outside which xi < rel_floor * peak. Half-infinite or infinite
  /// ends are reported as +/-infinity (step, constant).
  std::pair<double, double> support(double rel_floor = 1e-16) const;

  /// Integral of xi over the whole line (+infinity for step/constant).
  double integral() const;

  /// Integral of xi from -infinity to t (exact per shape kind; for sampled
  /// shapes the exact integral of the linear interpolant).
  double integral_to(double t) const;

 private:
  explicit PulseShape(ShapeKind kind) : kind_(kind) {}

  ShapeKind kind_;
  double duration_ = 0.0;   // gaussian
  double onset_ = 0.0;      // step
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> cum_;  // cumulative integral at nodes (sampled)
};

/// Pulse area a(t) = rate_scale * integral of xi up to t, together with the
/// instantaneous rate gamma_tilde(t) = rate_scale * xi(t). rate_scale is the
/// peak-normalized write/read rate (units of inverse time).
class AreaFunction {
 public:
  AreaFunction(PulseShape shape, double rate_scale);

  double rate_scale() const noexcept { return rate_scale_; }
  const PulseShape& shape() const noexcept { return shape_; }

  /// Instantaneous rate gamma_tilde(t).
  double rate(double t) const { return rate_scale_ * shape_.value(t); }

  /// Accumulated area a(t); non-decreasing, a(-inf) = 0.
  double operator()(double t) const { return rate_scale_ * shape_.integral_to(t); }

  /// Total area a(+inf); +infinity for step/constant shapes.
  double total() const { return rate_scale_ * shape_.integral(); }

 private:
  PulseShape shape_;
  double rate_scale_;
};

}  // namespace cvmem
