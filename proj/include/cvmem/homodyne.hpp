#pragma once

#include <vector>

#include "cvmem/kernels.hpp"
#include "cvmem/model.hpp"
#include "cvmem/temporal_mode.hpp"

namespace cvmem {

/// Decomposition of a normalized homodyne variance:
///   variance = shot_noise + signal * (e^{-2r} - 1),
/// all in shot-noise units of the chosen normalization. efficiency is
/// signal / shot_noise, the fraction of the measured power that carries the
/// squeezed input.
struct VarianceResult {
  double variance = 0.0;
  double shot_noise = 0.0;
  double signal = 0.0;
  double efficiency = 0.0;
};

/// Trapezoidal inner product of two sampled modes on the union of their grids
/// restricted to the overlap; both modes enter with piecewise-linear
/// (sampled-value) semantics so the product rule is exactly bilinear.
double inner_product(const TemporalMode& f, const TemporalMode& g);

/// Normalized variance of the homodyne current projected on local oscillator
/// `lo`, for kernel k re-evaluated at squeezing r:
///   variance = delta_coeff(r) + smooth-part quadratic form / <lo|lo>.
/// The lo grid span defines the measurement window. Throws
/// std::invalid_argument when the lo norm vanishes.
VarianceResult measured_variance(const Kernel& k, const TemporalMode& lo,
                                 double r);

/// Retrieval efficiency inferred from a variance measurement,
/// (1 - variance) / (1 - e^{-2r}); independent of r by construction.
/// Throws std::domain_error at r = 0 where the ratio degenerates to 0/0.
double readout_efficiency(const Kernel& k, const TemporalMode& lo, double r);

/// Local oscillator for delayed-envelope readout: sqrt(xi(t + delay)) sampled
/// on `grid`, i.e. the drive envelope advanced toward early times for
/// delay > 0.
TemporalMode lo_delayed_read(const PulseShape& shape, double delay,
                             std::vector<double> grid);

struct DelayOptimum {
  double delay = 0.0;       // optimal LO advance
  double efficiency = 0.0;  // retrieval efficiency at the optimum
};

/// Golden-section maximization of the delayed-envelope readout efficiency
/// over delay in [0, 5T] (gaussian envelopes only), to 1e-4 * T in delay.
DelayOptimum optimize_delay(const DerivedParams& d, const PulseShape& shape,
                            double r);

/// Upper bound eta * <f|f> on the efficiency of any LO, available for
/// retrieval-structure (rank-one) kernels; throws std::invalid_argument for
/// kernels with extra structure where no such bound is quoted.
double efficiency_bound(const Kernel& k);

/// Power collected by a boxcar window [0, window] on the constant-drive
/// retrieval current: shot_noise is the window's vacuum power, signal the
/// squeezed-mode power, variance their squeeze-weighted sum. Throws
/// std::invalid_argument when window <= 0.
VarianceResult spectrum_power(const DerivedParams& d, double r, double window);

}  // namespace cvmem
