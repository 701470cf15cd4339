#include "cvmem/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvmem/special.hpp"

namespace cvmem {

namespace {

// Union of both grids restricted to [lo, hi], endpoints included.
std::vector<double> union_grid(const std::vector<double>& a,
                               const std::vector<double>& b, double lo,
                               double hi) {
  std::vector<double> u;
  u.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  std::vector<double> out;
  out.reserve(u.size() + 2);
  out.push_back(lo);
  for (double t : u) {
    if (t > lo && t < hi && t != out.back()) out.push_back(t);
  }
  out.push_back(hi);
  return out;
}

// Quadratic form of the exponential-decay kernel part with the LO, using the
// LO's continuous evaluator when available (nested adaptive quadrature split
// at the |a(t)-a(s)| kink), otherwise a two-dimensional trapezoid on the LO
// grid.
double exp_term_form(const ExpDecayTerm& term, const TemporalMode& lo) {
  const double t0 = lo.grid.front();
  const double t1 = lo.grid.back();
  const AreaFunction& area = term.area;
  if (lo.has_eval()) {
    auto weighted = [&](double t) {
      const double rate = area.rate(t);
      return rate == 0.0 ? 0.0 : lo(t) * std::sqrt(rate);
    };
    auto outer = [&](double t) {
      const double wt = weighted(t);
      if (wt == 0.0) return 0.0;
      const double at = area(t);
      auto inner = [&](double s) {
        const double ws = weighted(s);
        return ws == 0.0 ? 0.0 : ws * std::exp(-std::abs(at - area(s)));
      };
      double acc = 0.0;
      if (t > t0) acc += integrate(inner, t0, t, 1e-9);
      if (t < t1) acc += integrate(inner, t, t1, 1e-9);
      return wt * acc;
    };
    return integrate(outer, t0, t1, 1e-8);
  }

  // Sampled-only LO: symmetric trapezoid double sum. Area is non-decreasing,
  // so the kink ordering follows the grid ordering.
  const std::size_t n = lo.grid.size();
  std::vector<double> u(n), av(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h_prev = i > 0 ? lo.grid[i] - lo.grid[i - 1] : 0.0;
    const double h_next = i + 1 < n ? lo.grid[i + 1] - lo.grid[i] : 0.0;
    const double w = 0.5 * (h_prev + h_next);
    const double rate = area.rate(lo.grid[i]);
    u[i] = rate == 0.0 ? 0.0 : lo.values[i] * std::sqrt(rate) * w;
    av[i] = area(lo.grid[i]);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] == 0.0) continue;
    acc += u[i] * u[i];
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (u[j] != 0.0) row += u[j] * std::exp(-(av[j] - av[i]));
    }
    acc += 2.0 * u[i] * row;
  }
  return acc;
}

}  // namespace

double inner_product(const TemporalMode& f, const TemporalMode& g) {
  if (f.grid.size() < 2 || g.grid.size() < 2) {
    throw std::invalid_argument("inner_product: mode without a grid");
  }
  const double lo = std::max(f.grid.front(), g.grid.front());
  const double hi = std::min(f.grid.back(), g.grid.back());
  if (!(lo < hi)) return 0.0;
  const std::vector<double> u = union_grid(f.grid, g.grid, lo, hi);
  double prev = f.interp(u[0]) * g.interp(u[0]);
  double acc = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double cur = f.interp(u[i]) * g.interp(u[i]);
    acc += 0.5 * (prev + cur) * (u[i] - u[i - 1]);
    prev = cur;
  }
  return acc;
}

VarianceResult measured_variance(const Kernel& k, const TemporalMode& lo,
                                 double r) {
  const double norm = inner_product(lo, lo);
  if (!(norm > 0.0)) {
    throw std::invalid_argument("measured_variance: zero-norm local oscillator");
  }
  double smooth = 0.0;
  for (const SeparableTerm& term : k.separable()) {
    const double overlap = inner_product(lo, term.mode);
    smooth += term.signal_coeff * overlap * overlap;
  }
  if (k.exp_term()) {
    smooth += k.exp_term()->signal_coeff * exp_term_form(*k.exp_term(), lo);
  }
  VarianceResult res;
  res.shot_noise = 1.0;
  res.signal = k.delta_signal() + smooth / norm;
  res.variance = res.shot_noise + res.signal * Kernel::squeeze_factor(r);
  res.efficiency = res.signal / res.shot_noise;
  return res;
}

double readout_efficiency(const Kernel& k, const TemporalMode& lo, double r) {
  if (r == 0.0) {
    throw std::domain_error(
        "readout_efficiency: undefined at r = 0 (0/0 variance contrast)");
  }
  const VarianceResult res = measured_variance(k, lo, r);
  return (res.shot_noise - res.variance) / -Kernel::squeeze_factor(r);
}

TemporalMode lo_delayed_read(const PulseShape& shape, double delay,
                             std::vector<double> grid) {
  if (!std::isfinite(delay)) {
    throw std::invalid_argument("lo_delayed_read: non-finite delay");
  }
  auto f = [shape, delay](double t) { return std::sqrt(shape.value(t + delay)); };
  return sample_mode(f, std::move(grid));
}

DelayOptimum optimize_delay(const DerivedParams& d, const PulseShape& shape,
                            double r) {
  if (shape.kind() != ShapeKind::gaussian) {
    throw std::invalid_argument("optimize_delay: gaussian envelopes only");
  }
  const double T = shape.duration();
  const AreaFunction area(shape, d.gt0);
  const Kernel k = readout_kernel(d, area, r);

  auto eff = [&](double delay) {
    // Grid centered on the advanced envelope so its mass is fully covered.
    std::vector<double> g = linspace(-delay - 8.0 * T, -delay + 8.0 * T, 4096);
    const TemporalMode lo = lo_delayed_read(shape, delay, std::move(g));
    return measured_variance(k, lo, r).efficiency;
  };

  constexpr double kGolden = 0.6180339887498949;
  double a = 0.0;
  double b = 5.0 * T;
  double c = b - kGolden * (b - a);
  double e = a + kGolden * (b - a);
  double fc = eff(c);
  double fe = eff(e);
  while (b - a > 1e-4 * T) {
    if (fc > fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - kGolden * (b - a);
      fc = eff(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + kGolden * (b - a);
      fe = eff(e);
    }
  }
  DelayOptimum opt;
  opt.delay = 0.5 * (a + b);
  opt.efficiency = eff(opt.delay);
  return opt;
}

double efficiency_bound(const Kernel& k) {
  if (!k.rank_one()) {
    throw std::invalid_argument(
        "efficiency_bound: only available for retrieval-structure kernels");
  }
  const SeparableTerm& term = k.separable().front();
  std::vector<double> sq(term.mode.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    sq[i] = term.mode.values[i] * term.mode.values[i];
  }
  return term.signal_coeff * trapezoid(term.mode.grid, sq);
}

VarianceResult spectrum_power(const DerivedParams& d, double r, double window) {
  if (!(window > 0.0)) {
    throw std::invalid_argument("spectrum_power: window must be > 0");
  }
  if (!(d.gt0 > 0.0)) {
    throw std::invalid_argument("spectrum_power: needs gt0 > 0");
  }
  const double gt0 = d.gt0;
  auto mode_sq = [gt0](double t) {
    return 2.0 * gt0 * std::exp(-2.0 * gt0 * t);
  };
  const double shot = integrate(mode_sq, 0.0, window, 1e-12);
  VarianceResult res;
  res.shot_noise = shot;
  res.signal = d.eta * shot * shot;
  res.variance = res.shot_noise + res.signal * Kernel::squeeze_factor(r);
  res.efficiency = res.signal / res.shot_noise;
  return res;
}

}  // namespace cvmem
