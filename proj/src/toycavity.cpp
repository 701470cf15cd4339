#include "cvmem/toycavity.hpp"

#include <cmath>
#include <stdexcept>

namespace cvmem {

void CavityParams::validate() const {
  if (!(kappa_peak >= 0.0) || !std::isfinite(kappa_peak)) {
    throw std::invalid_argument("CavityParams: kappa_peak must be >= 0");
  }
  if (!(round_trip > 0.0) || !std::isfinite(round_trip)) {
    throw std::invalid_argument("CavityParams: round_trip must be > 0");
  }
  if (!std::isfinite(squeezing)) {
    throw std::invalid_argument("CavityParams: squeezing must be finite");
  }
}

bool CavityParams::transmission_exceeds_unity() const {
  validate();
  return 2.0 * kappa_peak * profile.peak() * round_trip > 1.0;
}

double cavity_write_variance(const CavityParams& c, double t) {
  c.validate();
  const DerivedParams d = DerivedParams::from_composites(1.0, c.kappa_peak);
  return write_variance(d, c.area(), c.squeezing, t);
}

Kernel cavity_readout_kernel(const CavityParams& c, std::vector<double> grid) {
  c.validate();
  const DerivedParams d = DerivedParams::from_composites(1.0, c.kappa_peak);
  return readout_kernel(d, c.area(), c.squeezing, std::move(grid));
}

EquivalenceReport equivalence_report(const DerivedParams& d,
                                     const PulseShape& shape, double r) {
  const AreaFunction area(shape, d.gt0);
  CavityParams cav;
  cav.profile = shape;
  cav.kappa_peak = d.gt0;
  // Keep the peak per-pass transmission at 1/2 so the discrete picture holds.
  cav.round_trip = d.gt0 > 0.0 ? 0.25 / (d.gt0 * shape.peak()) : 1.0;
  cav.squeezing = r;

  std::vector<double> grid = default_kernel_grid(area, 1024);
  const Kernel atomic = readout_kernel(d, area, r, grid);
  const Kernel cavity = cavity_readout_kernel(cav, grid);

  EquivalenceReport rep;
  rep.transmission_warning = cav.transmission_exceeds_unity();
  rep.delta_deviation = std::abs(atomic.delta_coeff() - cavity.delta_coeff());
  // Subsample the grid for the two-time comparison.
  const std::size_t stride = grid.size() / 64 > 0 ? grid.size() / 64 : 1;
  for (std::size_t i = 0; i < grid.size(); i += stride) {
    for (std::size_t j = i; j < grid.size(); j += stride) {
      const double dev = std::abs(atomic.smooth_eval(grid[i], grid[j]) -
                                  cavity.smooth_eval(grid[i], grid[j]));
      rep.max_kernel_deviation = std::max(rep.max_kernel_deviation, dev);
    }
  }
  for (double t : grid) {
    const double dev =
        std::abs(write_variance(d, area, r, t) - cavity_write_variance(cav, t));
    rep.max_variance_deviation = std::max(rep.max_variance_deviation, dev);
  }
  rep.pass = rep.max_kernel_deviation <= 1e-12 &&
             rep.max_variance_deviation <= 1e-12 &&
             rep.delta_deviation <= 1e-12;
  return rep;
}

}  // namespace cvmem
