#include "cvmem/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cvmem/special.hpp"

namespace cvmem {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite_nonneg(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string("MemoryParams: ") + name +
                                " must be finite and >= 0");
  }
}

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string("MemoryParams: ") + name +
                                " must be finite and > 0");
  }
}
}  // namespace

void MemoryParams::validate() const {
  require_positive(gamma, "gamma");
  require_positive(kappa, "kappa");
  require_positive(tau, "tau");
  require_positive(atoms, "atoms");
  require_finite_nonneg(coupling, "coupling");
  require_finite_nonneg(rabi_peak, "rabi_peak");
  require_finite_nonneg(gamma0, "gamma0");
  if (!std::isfinite(squeezing)) {
    throw std::invalid_argument("MemoryParams: squeezing must be finite");
  }
}

MemoryParams MemoryParams::for_targets(double eta, double gt0,
                                       double separation, double atoms) {
  if (!(eta > 0.0) || !(eta < 1.0)) {
    throw std::invalid_argument("for_targets: eta must lie in (0, 1)");
  }
  if (!(gt0 > 0.0) || !(separation > 0.0) || !(atoms > 0.0)) {
    throw std::invalid_argument(
        "for_targets: gt0, separation, atoms must be > 0");
  }
  const double coop = eta / (2.0 * (1.0 - eta));
  MemoryParams p;
  p.gamma = separation * gt0;
  p.kappa = separation * gt0;
  p.atoms = atoms;
  const double transmission = 0.02;
  p.tau = transmission / (2.0 * p.kappa);
  p.coupling = std::sqrt(coop * p.gamma * transmission / atoms);
  p.rabi_peak = std::sqrt(gt0 * p.gamma * (1.0 + 2.0 * coop));
  p.validate();
  return p;
}

DerivedParams DerivedParams::from_composites(double eta, double gt0,
                                             double atoms) {
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument("from_composites: eta must lie in (0, 1]");
  }
  if (!(gt0 >= 0.0) || !std::isfinite(gt0) || !(atoms > 0.0)) {
    throw std::invalid_argument("from_composites: bad gt0 or atoms");
  }
  DerivedParams d;
  d.transmission = std::numeric_limits<double>::quiet_NaN();
  d.cooperativity = eta < 1.0 ? eta / (2.0 * (1.0 - eta)) : kInf;
  d.eta = eta;
  d.gt0 = gt0;
  d.atoms = atoms;
  d.beta_peak = std::sqrt(0.5 * atoms * gt0 * eta);
  return d;
}

DerivedParams derive(const MemoryParams& p) {
  p.validate();
  DerivedParams d;
  d.transmission = 2.0 * p.kappa * p.tau;
  d.cooperativity =
      p.coupling * p.coupling * p.atoms / (p.gamma * d.transmission);
  d.eta = 2.0 * d.cooperativity / (1.0 + 2.0 * d.cooperativity);
  d.gt0 = p.rabi_peak * p.rabi_peak /
          (p.gamma * (1.0 + 2.0 * d.cooperativity));
  d.atoms = p.atoms;
  d.beta_peak = std::sqrt(0.5 * p.atoms * d.gt0 * d.eta);
  return d;
}

AdiabaticReport check_adiabatic(const MemoryParams& p) {
  const DerivedParams d = derive(p);
  AdiabaticReport rep;
  rep.ground_ratio = p.gamma0 == 0.0 ? kInf : d.gt0 / p.gamma0;
  rep.dipole_ratio = d.gt0 > 0.0 ? p.gamma / d.gt0 : kInf;
  rep.cavity_ratio = d.gt0 > 0.0 ? p.kappa / d.gt0 : kInf;
  rep.pass = rep.ground_ratio >= 100.0 && rep.dipole_ratio >= 100.0 &&
             rep.cavity_ratio >= 100.0;
  return rep;
}

double write_variance(const DerivedParams& d, const AreaFunction& area,
                      double r, double t) {
  const double decay = std::exp(-2.0 * area(t));
  const double steady = d.eta * std::exp(-2.0 * r) + 1.0 - d.eta;
  return decay + (1.0 - decay) * steady;
}

double write_efficiency(const DerivedParams& d, const AreaFunction& area,
                        double t) {
  return d.eta * (1.0 - std::exp(-2.0 * area(t)));
}

TemporalMode emission_mode(const AreaFunction& area, std::vector<double> grid,
                           EmissionDiagnostics* diag) {
  auto f = [area](double t) {
    const double rate = area.rate(t);
    return rate == 0.0 ? 0.0 : std::sqrt(2.0 * rate) * std::exp(-area(t));
  };
  TemporalMode mode = sample_mode(f, std::move(grid));
  if (diag != nullptr) {
    std::vector<double> sq(mode.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
      sq[i] = mode.values[i] * mode.values[i];
    }
    diag->norm_grid = trapezoid(mode.grid, sq);
    diag->norm_closed = mode_norm_closed(area);
    const double scale = std::max(diag->norm_closed, 1e-30);
    diag->grid_warning =
        std::abs(diag->norm_grid - diag->norm_closed) > 1e-6 * scale;
  }
  return mode;
}

double mode_norm_closed(const AreaFunction& area) {
  const double a_inf = area.total();
  return -std::expm1(-2.0 * a_inf);
}

double emission_peak_delay(double gt0, double duration) {
  if (!(gt0 >= 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("emission_peak_delay: need gt0 >= 0, T > 0");
  }
  const double x = 2.0 * gt0 * gt0 * duration * duration / M_PI;
  return duration * std::sqrt(0.5 * lambert_w0(x));
}

}  // namespace cvmem
