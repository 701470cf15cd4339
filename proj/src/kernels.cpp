#include "cvmem/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cvmem {

Kernel::Kernel(double r, double delta_signal,
               std::vector<SeparableTerm> separable,
               std::optional<ExpDecayTerm> exp_term)
    : r_(r),
      delta_signal_(delta_signal),
      separable_(std::move(separable)),
      exp_term_(std::move(exp_term)) {
  if (!std::isfinite(r) || !std::isfinite(delta_signal)) {
    throw std::invalid_argument("Kernel: non-finite coefficient");
  }
  for (const SeparableTerm& term : separable_) {
    if (!std::isfinite(term.signal_coeff)) {
      throw std::invalid_argument("Kernel: non-finite separable coefficient");
    }
    if (term.mode.grid.size() < 2) {
      throw std::invalid_argument("Kernel: separable mode has no grid");
    }
  }
  if (exp_term_ && !std::isfinite(exp_term_->signal_coeff)) {
    throw std::invalid_argument("Kernel: non-finite exp coefficient");
  }
}

double Kernel::squeeze_factor(double r) { return std::expm1(-2.0 * r); }

double Kernel::delta_coeff() const { return delta_coeff(r_); }

double Kernel::delta_coeff(double r) const {
  return 1.0 + delta_signal_ * squeeze_factor(r);
}

bool Kernel::rank_one() const noexcept {
  return separable_.size() == 1 && !exp_term_.has_value() &&
         delta_signal_ == 0.0;
}

double Kernel::smooth_eval(double t, double tp, double r) const {
  double signal = 0.0;
  for (const SeparableTerm& term : separable_) {
    signal += term.signal_coeff * term.mode(t) * term.mode(tp);
  }
  if (exp_term_) {
    const double rate_t = exp_term_->area.rate(t);
    const double rate_tp = exp_term_->area.rate(tp);
    if (rate_t > 0.0 && rate_tp > 0.0) {
      const double da = std::abs(exp_term_->area(t) - exp_term_->area(tp));
      signal += exp_term_->signal_coeff * std::sqrt(rate_t * rate_tp) *
                std::exp(-da);
    }
  }
  return signal * squeeze_factor(r);
}

double kernel_smooth_eval(const Kernel& k, double t, double tp) {
  return k.smooth_eval(t, tp);
}

std::vector<double> default_kernel_grid(const AreaFunction& area,
                                        std::size_t points) {
  const PulseShape& shape = area.shape();
  switch (shape.kind()) {
    case ShapeKind::gaussian: {
      const double half = 8.0 * shape.duration();
      return linspace(-half, half, points);
    }
    case ShapeKind::step: {
      if (!(area.rate_scale() > 0.0)) {
        throw std::invalid_argument(
            "default_kernel_grid: step shape needs rate_scale > 0");
      }
      return linspace(shape.onset(), shape.onset() + 20.0 / area.rate_scale(),
                      points);
    }
    case ShapeKind::sampled: {
      const auto span = shape.support(0.0);
      return linspace(span.first, span.second, points);
    }
    case ShapeKind::constant:
      throw std::invalid_argument(
          "default_kernel_grid: constant shape has no natural span");
  }
  throw std::invalid_argument("default_kernel_grid: unknown shape");
}

Kernel readout_kernel(const DerivedParams& d, const AreaFunction& area,
                      double r, std::vector<double> grid) {
  if (grid.empty()) grid = default_kernel_grid(area);
  TemporalMode mode = emission_mode(area, std::move(grid));
  std::vector<SeparableTerm> sep;
  sep.push_back({d.eta, std::move(mode)});
  return Kernel(r, 0.0, std::move(sep), std::nullopt);
}

Kernel write_kernel(const DerivedParams& d, const AreaFunction& area, double r,
                    std::vector<double> grid) {
  if (grid.empty()) grid = default_kernel_grid(area);
  TemporalMode mode = emission_mode(area, std::move(grid));
  const double eta = d.eta;
  std::vector<SeparableTerm> sep;
  sep.push_back({-eta * eta, std::move(mode)});
  std::optional<ExpDecayTerm> exp_term;
  const double exp_coeff = 2.0 * eta * (1.0 - eta);
  if (exp_coeff != 0.0) exp_term = ExpDecayTerm{exp_coeff, area};
  const double delta_signal = (2.0 * eta - 1.0) * (2.0 * eta - 1.0);
  return Kernel(r, delta_signal, std::move(sep), std::move(exp_term));
}

Kernel cw_step_kernel(const DerivedParams& d, double r, double t_end,
                      std::size_t points) {
  if (!(d.gt0 > 0.0)) {
    throw std::invalid_argument("cw_step_kernel: needs gt0 > 0");
  }
  if (t_end <= 0.0) t_end = 20.0 / d.gt0;
  AreaFunction area(PulseShape::step(0.0), d.gt0);
  return readout_kernel(d, area, r, linspace(0.0, t_end, points));
}

}  // namespace cvmem
