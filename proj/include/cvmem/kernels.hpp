#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cvmem/model.hpp"
#include "cvmem/profiles.hpp"
#include "cvmem/temporal_mode.hpp"

namespace cvmem {

/// One separable contribution coeff * m(t) * m(t') to the smooth kernel part,
/// where coeff multiplies the squeeze factor (e^{-2r} - 1).
struct SeparableTerm {
  double signal_coeff = 0.0;
  TemporalMode mode;
};

/// Non-separable contribution coeff * sqrt(rate(t) rate(t')) *
/// exp(-|a(t) - a(t')|), again scaled by the squeeze factor.
struct ExpDecayTerm {
  double signal_coeff = 0.0;
  AreaFunction area;
};

/// Two-time correlation kernel of a homodyne current,
///   K(t, t') = delta_coeff * delta(t - t') + smooth(t, t'),
/// decomposed so that every squeezing-dependent piece carries an explicit
/// factor (e^{-2r} - 1). This keeps the r = 0 limit exactly shot-noise
/// white and lets measurements be re-evaluated at a different r.
class Kernel {
 public:
  Kernel(double r, double delta_signal, std::vector<SeparableTerm> separable,
         std::optional<ExpDecayTerm> exp_term);

  /// Squeezing parameter the kernel was built for.
  double squeezing() const noexcept { return r_; }
  /// e^{-2r} - 1 at a given squeezing.
  static double squeeze_factor(double r);

  /// Coefficient of the delta ridge: 1 + delta_signal * (e^{-2r} - 1).
  double delta_coeff() const;
  double delta_coeff(double r) const;
  double delta_signal() const noexcept { return delta_signal_; }

  const std::vector<SeparableTerm>& separable() const noexcept {
    return separable_;
  }
  const std::optional<ExpDecayTerm>& exp_term() const noexcept {
    return exp_term_;
  }

  /// True when the smooth part is a single separable term and the delta ridge
  /// carries no squeezing dependence (pure retrieval structure).
  bool rank_one() const noexcept;

  /// Smooth (non-delta) part at (t, t') for the construction squeezing.
  double smooth_eval(double t, double tp) const { return smooth_eval(t, tp, r_); }
  /// Same, re-scaled to squeezing r.
  double smooth_eval(double t, double tp, double r) const;

 private:
  double r_;
  double delta_signal_;
  std::vector<SeparableTerm> separable_;
  std::optional<ExpDecayTerm> exp_term_;
};

/// Free-function alias for Kernel::smooth_eval at construction squeezing.
double kernel_smooth_eval(const Kernel& k, double t, double tp);

/// Sampling grid matched to the envelope support (gaussian: +/-8T; step:
/// 20 e-foldings of the retrieved mode; sampled: the node span).
std::vector<double> default_kernel_grid(const AreaFunction& area,
                                        std::size_t points = 4096);

/// Retrieval-phase current kernel: delta(t-t') plus
/// eta * f(t) f(t') * (e^{-2r} - 1) with f the emission mode.
Kernel readout_kernel(const DerivedParams& d, const AreaFunction& area,
                      double r, std::vector<double> grid = {});

/// Write-phase transmitted-light kernel:
///   [1 + (2 eta - 1)^2 (e^{-2r} - 1)] delta(t-t')
///   - eta^2 (e^{-2r} - 1) f(t) f(t')
///   + 2 eta (1 - eta) (e^{-2r} - 1) sqrt(rate(t) rate(t')) e^{-|a(t)-a(t')|}.
Kernel write_kernel(const DerivedParams& d, const AreaFunction& area, double r,
                    std::vector<double> grid = {});

/// Retrieval kernel for a constant drive switched on at t = 0, whose emission
/// mode is sqrt(2 gt0) e^{-gt0 t} for t >= 0. t_end <= 0 picks 20 e-foldings.
Kernel cw_step_kernel(const DerivedParams& d, double r, double t_end = 0.0,
                      std::size_t points = 4096);

}  // namespace cvmem
