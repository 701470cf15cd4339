#pragma once

#include <vector>

#include "cvmem/kernels.hpp"
#include "cvmem/model.hpp"
#include "cvmem/profiles.hpp"

namespace cvmem {

/// Single-mode cavity with a time-varying output coupling
/// kappa(t) = kappa_peak * xi(t): the minimal system sharing the memory's
/// write/read structure, reached from the atomic chain in the eta -> 1 limit
/// with the swap rate replaced by kappa(t).
struct CavityParams {
  PulseShape profile = PulseShape::constant();
  double kappa_peak = 0.0;  // coupling scale (inverse time)
  double round_trip = 0.0;  // tau, sets the per-pass transmission
  double squeezing = 0.0;   // input squeezing r

  /// Accumulated coupling area A(t) = integral of kappa.
  AreaFunction area() const { return AreaFunction(profile, kappa_peak); }

  /// True when the peak per-pass transmission 2 kappa(t) tau exceeds 1,
  /// i.e. the discrete mirror picture stops making sense. A diagnostic,
  /// not an error.
  bool transmission_exceeds_unity() const;

  void validate() const;
};

/// Intracavity variance during loading: e^{-2A} + (1 - e^{-2A}) e^{-2r}.
double cavity_write_variance(const CavityParams& c, double t);

/// Retrieval kernel of the emptying cavity: delta(t - t') plus
/// f(t) f(t') (e^{-2r} - 1) with f = sqrt(2 kappa(t)) e^{-A(t)}.
Kernel cavity_readout_kernel(const CavityParams& c,
                             std::vector<double> grid = {});

struct EquivalenceReport {
  double max_kernel_deviation = 0.0;    // worst smooth-kernel mismatch
  double delta_deviation = 0.0;         // delta-ridge coefficient mismatch
  double max_variance_deviation = 0.0;  // worst write-variance mismatch
  bool transmission_warning = false;
  bool pass = false;  // all deviations <= 1e-12
};

/// Compares the atomic-memory write variance and retrieval kernel at the
/// given efficiency d.eta against the cavity with kappa_peak = d.gt0 and the
/// same envelope. At eta = 1 the two coincide identically; below 1 the
/// reported deviations measure the excess vacuum admixture.
EquivalenceReport equivalence_report(const DerivedParams& d,
                                     const PulseShape& shape, double r);

}  // namespace cvmem
