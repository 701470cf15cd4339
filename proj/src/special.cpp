#include "cvmem/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace cvmem {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

// Initial guess for W0 split by region; Halley iteration cleans it up.
double w0_guess(double x) {
  if (x < -0.32358170806015724) {  // -1/e < x < -0.32: branch-point series
    const double p = std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x < 1.0) {  // Pade-like rational fit around 0
    return x * (1.0 + 1.5 * x) / (1.0 + x * (2.5 + 0.875 * x));
  }
  // Asymptotic L1 - L2 + L2/L1 for large arguments.
  const double l1 = std::log(x);
  const double l2 = std::log(l1 > 0.0 ? l1 : 1e-300);
  return (x < 3.0) ? l1 : l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
  if (x < -kInvE) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::numeric_limits<double>::infinity();

  double w = w0_guess(x);
  // Halley's method on f(w) = w e^w - x.
  for (int i = 0; i < 50; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    double dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    if (!std::isfinite(dw)) break;
    w -= dw;
    if (w < -1.0) w = -1.0;  // principal branch floor
    if (std::abs(dw) <= 1e-15 * std::max(1.0, std::abs(w))) return w;
  }
  // Halley stalled (can happen extremely close to the branch point, where
  // f' -> 0): fall back to bisection on the monotone principal branch.
  double a = -1.0;
  double b = std::max(w, 0.0) + 1.0;
  while (b * std::exp(b) < x) b *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (m * std::exp(m) < x ? a : b) = m;
    if (b - a <= 1e-15 * std::max(1.0, std::abs(a))) break;
  }
  return 0.5 * (a + b);
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK dqk15 values).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelEstimate {
  double value;
  double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_g = kWg[3] * fc;
  double res_k = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double fsum = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
    res_k += kWgk[j] * fsum;
    if (j % 2 == 1) res_g += kWg[j / 2] * fsum;
  }
  res_g *= h;
  res_k *= h;
  return {res_k, std::abs(res_k - res_g)};
}

struct Panel {
  double a, b, value, error;
  int depth;
};

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const {
    return x.error < y.error;
  }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol, int max_depth) {
  if (std::isnan(lo) || std::isnan(hi)) {
    throw std::invalid_argument("integrate: NaN endpoint");
  }
  if (lo == hi) return 0.0;
  if (lo > hi) return -integrate(f, hi, lo, rel_tol, max_depth);

  // Map infinite endpoints onto a finite interval. The guard against
  // evaluating f at an overflowing abscissa: once f underflows to zero the
  // Jacobian no longer matters, so return 0 instead of 0 * inf.
  std::function<double(double)> g;
  double a = lo;
  double b = hi;
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (lo_inf && hi_inf) {
    g = [&f](double u) {
      const double d = 1.0 - u * u;
      const double t = u / d;
      const double v = f(t);
      return v == 0.0 ? 0.0 : v * (1.0 + u * u) / (d * d);
    };
    a = -1.0;
    b = 1.0;
  } else if (hi_inf) {
    g = [&f, lo](double u) {
      const double d = 1.0 - u;
      const double v = f(lo + u / d);
      return v == 0.0 ? 0.0 : v / (d * d);
    };
    a = 0.0;
    b = 1.0;
  } else if (lo_inf) {
    g = [&f, hi](double u) {
      const double d = 1.0 - u;
      const double v = f(hi - u / d);
      return v == 0.0 ? 0.0 : v / (d * d);
    };
    a = 0.0;
    b = 1.0;
  } else {
    g = f;
  }

  // Global adaptive refinement: keep splitting the panel with the largest
  // error estimate until the summed error meets the relative target. The
  // target tracks the accumulating value, so mass concentrated in a tiny
  // fraction of a long interval is found rather than tolerated away.
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  const PanelEstimate first = gk15(g, a, b);
  heap.push({a, b, first.value, first.error, 0});
  double value = first.value;
  double error = first.error;
  double mass = std::abs(first.value);  // L1 proxy for the round-off floor
  double frozen_error = 0.0;
  int panels = 1;
  constexpr int kPanelBudget = 20000;

  auto target = [&]() {
    return std::max({rel_tol * std::abs(value), 5e-16 * mass, 1e-300});
  };

  while (error > target()) {
    if (heap.empty() || panels >= kPanelBudget) {
      throw tolerance_error(
          "integrate: adaptive quadrature stalled (error " +
              std::to_string(error) + " > tolerance " +
              std::to_string(target()) + ")",
          value);
    }
    const Panel top = heap.top();
    heap.pop();
    const double width = top.b - top.a;
    if (top.depth >= max_depth ||
        width <= 1e-15 * (std::abs(top.a) + std::abs(top.b))) {
      frozen_error += top.error;  // cannot be improved further
      continue;
    }
    const double m = 0.5 * (top.a + top.b);
    const PanelEstimate left = gk15(g, top.a, m);
    const PanelEstimate right = gk15(g, m, top.b);
    value += left.value + right.value - top.value;
    error += left.error + right.error - top.error;
    mass += std::abs(left.value) + std::abs(right.value) - std::abs(top.value);
    heap.push({top.a, m, left.value, left.error, top.depth + 1});
    heap.push({m, top.b, right.value, right.error, top.depth + 1});
    ++panels;
  }
  return value;
}

}  // namespace cvmem
