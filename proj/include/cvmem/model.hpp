#pragma once

#include <vector>

#include "cvmem/profiles.hpp"
#include "cvmem/temporal_mode.hpp"

namespace cvmem {

/// Physical parameters of the cavity-mediated atomic memory. Rates are in
/// arbitrary but mutually consistent inverse-time units.
struct MemoryParams {
  double gamma = 0.0;       // optical dipole relaxation rate
  double kappa = 0.0;       // cavity field decay rate (bandwidth)
  double tau = 0.0;         // cavity round-trip time
  double coupling = 0.0;    // single-atom coupling g
  double atoms = 0.0;       // atom number N
  double rabi_peak = 0.0;   // drive amplitude scale: Omega(t)^2 = rabi_peak^2 * xi(t)
  double gamma0 = 0.0;      // residual ground-state decoherence rate
  double squeezing = 0.0;   // input squeezing parameter r

  /// Throws std::invalid_argument when any rate is negative/non-finite or a
  /// required positive quantity (gamma, kappa, tau, atoms) is not > 0.
  void validate() const;

  /// Builds a parameter set that realizes the requested memory efficiency
  /// eta in (0,1), peak swap rate gt0 > 0, and time-scale separation
  /// `separation` = gamma/gt0 = kappa/gt0. atoms and tau fix the remaining
  /// gauge freedom; the round-trip transmission 2*kappa*tau is kept at 0.02.
  static MemoryParams for_targets(double eta, double gt0, double separation,
                                  double atoms = 1e6);
};

/// Composite quantities the dynamics actually depends on.
struct DerivedParams {
  double transmission = 0.0;   // round-trip transmission 2*kappa*tau
  double cooperativity = 0.0;  // C = g^2 N / (gamma * transmission)
  double eta = 0.0;            // memory efficiency 2C / (1 + 2C)
  double gt0 = 0.0;            // peak swap rate gamma_tilde_0
  double beta_peak = 0.0;      // peak read/write mode amplitude
  double atoms = 0.0;

  /// Builds the composites directly from (eta, gt0) without an underlying
  /// physical parameter set; transmission is left NaN. eta in (0, 1].
  static DerivedParams from_composites(double eta, double gt0,
                                       double atoms = 1e6);
};

/// Composite parameters implied by a physical parameter set, with rabi_peak
/// interpreted as the drive amplitude at envelope peak.
DerivedParams derive(const MemoryParams& p);

/// Time-scale separation ratios backing the coarse-grained description:
/// the swap rate must dominate residual ground-state decoherence while being
/// dominated by both the dipole and cavity rates.
struct AdiabaticReport {
  double ground_ratio = 0.0;  // gt0 / gamma0  (infinity when gamma0 == 0)
  double dipole_ratio = 0.0;  // gamma / gt0
  double cavity_ratio = 0.0;  // kappa / gt0
  bool pass = false;          // all ratios >= 100 (ground: or gamma0 == 0)
};

AdiabaticReport check_adiabatic(const MemoryParams& p);

/// Memory-quadrature variance during the write phase at time t, for input
/// squeezing r (shot noise = 1):
///   V(t) = e^{-2a} + (1 - e^{-2a}) * (eta * e^{-2r} + 1 - eta),
/// with a = area(t). Pass -r for the anti-squeezed quadrature.
double write_variance(const DerivedParams& d, const AreaFunction& area,
                      double r, double t);

/// Fraction of the input mode stored by time t: eta * (1 - e^{-2a(t)}).
/// Independent of r.
double write_efficiency(const DerivedParams& d, const AreaFunction& area,
                        double t);

struct EmissionDiagnostics {
  double norm_grid = 0.0;    // trapezoid norm of the sampled mode
  double norm_closed = 0.0;  // closed-form norm 1 - e^{-2a(inf)}
  bool grid_warning = false; // grids too coarse to resolve the mode
};

/// Temporal mode of the retrieved field, f(t) = sqrt(2*gammat(t)) * e^{-a(t)},
/// sampled on `grid` with the continuous evaluator attached. When diag is
/// given, compares the trapezoid norm against the closed form and flags
/// grids whose relative defect exceeds 1e-6.
TemporalMode emission_mode(const AreaFunction& area, std::vector<double> grid,
                           EmissionDiagnostics* diag = nullptr);

/// Closed-form squared norm of the emission mode: 1 - e^{-2a(inf)}.
double mode_norm_closed(const AreaFunction& area);

/// Time of peak emission for a gaussian envelope of width T: the emission
/// maximum sits at -t0 (before the envelope peak) with
///   t0 = T * sqrt( W0(2 gt0^2 T^2 / pi) / 2 ).
/// Returns t0 >= 0.
double emission_peak_delay(double gt0, double duration);

}  // namespace cvmem
