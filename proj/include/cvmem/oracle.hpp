#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "cvmem/model.hpp"
#include "cvmem/profiles.hpp"
#include "cvmem/rk45.hpp"
#include "cvmem/temporal_mode.hpp"

namespace cvmem {

/// Index labels of the six-component quadrature vector used by the
/// second-moment propagator: intracavity field, optical dipole, collective
/// spin — one (x, y) pair each, all normalized to unit vacuum variance.
enum StateIndex : int {
  kFieldX = 0,
  kFieldY = 1,
  kDipoleX = 2,
  kDipoleY = 3,
  kSpinX = 4,
  kSpinY = 5,
};

/// Symmetric 6x6 covariance snapshot at one time.
struct CovarianceState {
  double time = 0.0;
  std::array<double, 36> sigma{};  // row-major

  double at(int i, int j) const { return sigma[static_cast<std::size_t>(6 * i + j)]; }
  /// Smallest eigenvalue of the symmetrized matrix (cyclic Jacobi).
  double min_eigenvalue() const;
  /// Largest |sigma_ij - sigma_ji|.
  double symmetry_defect() const;
};

/// Drive-off stationary covariance for the given parameters and input
/// squeezing p.squeezing: the field-dipole block solves the algebraic
/// steady-state moment equation, the spin block is vacuum.
std::array<double, 36> stationary_covariance(const MemoryParams& p);

/// Propagates the full second-moment equation dS/dt = M S + S M^T + D through
/// the drive envelope, reporting the covariance at every grid time. The state
/// starts in the drive-off stationary covariance at grid.front(), so the grid
/// should begin where the envelope is negligible. Throws tolerance_error when
/// the stepper cannot resolve the rate separation (message names the
/// kappa/gt0 and gamma/gt0 ratios).
std::vector<CovarianceState> propagate_full(const MemoryParams& p,
                                            const PulseShape& shape,
                                            const std::vector<double>& grid,
                                            const OdeOptions& opts = {});

/// Propagates the coarse-grained single-mode variance
///   dV/dt = -2 gammat(t) V + 2 gammat(t) (eta e^{-2r} + 1 - eta)
/// from initial_variance at grid.front(), reporting V at every grid time.
std::vector<double> propagate_reduced(const DerivedParams& d,
                                      const PulseShape& shape, double r,
                                      const std::vector<double>& grid,
                                      double initial_variance = 1.0,
                                      const OdeOptions& opts = {});

enum class Phase { write, read };

/// Independent route to any homodyne variance: propagates the joint second
/// moments of the stored-spin quadrature and the LO-weighted current
/// integral through the coarse-grained input-output relation, returning the
/// normalized variance <S^2>/<shot>. Phase selects which leg carries the
/// squeezed state: write = squeezed input light on a vacuum spin, read =
/// vacuum input light on a spin squeezed to e^{-2r}. The lo grid span sets
/// the integration window. Throws std::invalid_argument for a zero-norm LO.
double homodyne_variance_oracle(const DerivedParams& d, const PulseShape& shape,
                                const TemporalMode& lo, Phase phase, double r,
                                const OdeOptions& opts = {});

/// Writes "time, upper-triangle covariance" CSV rows (with a '#' comment
/// header) for a propagated trajectory.
void dump_trajectory(const std::vector<CovarianceState>& traj,
                     std::ostream& os);

}  // namespace cvmem
