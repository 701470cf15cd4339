#include "cvmem/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cvmem/special.hpp"

namespace cvmem {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrtPi = 0.5641895835477563;
}  // namespace

PulseShape PulseShape::gaussian(double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("PulseShape::gaussian: duration must be > 0");
  }
  PulseShape s(ShapeKind::gaussian);
  s.duration_ = duration;
  return s;
}

PulseShape PulseShape::step(double onset) {
  if (!std::isfinite(onset)) {
    throw std::invalid_argument("PulseShape::step: onset must be finite");
  }
  PulseShape s(ShapeKind::step);
  s.onset_ = onset;
  return s;
}

PulseShape PulseShape::constant() { return PulseShape(ShapeKind::constant); }

PulseShape PulseShape::sampled(std::vector<double> times,
                               std::vector<double> values) {
  if (times.size() < 2 || times.size() != values.size()) {
    throw std::invalid_argument(
        "PulseShape::sampled: need >= 2 nodes and matching sizes");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("PulseShape::sampled: non-finite node");
    }
    if (values[i] < 0.0) {
      throw std::invalid_argument("PulseShape::sampled: negative envelope");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument(
          "PulseShape::sampled: times must be strictly increasing");
    }
  }
  PulseShape s(ShapeKind::sampled);
  s.cum_.resize(times.size(), 0.0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    s.cum_[i] = s.cum_[i - 1] + 0.5 * (values[i] + values[i - 1]) *
                                    (times[i] - times[i - 1]);
  }
  s.times_ = std::move(times);
  s.values_ = std::move(values);
  return s;
}

double PulseShape::duration() const {
  if (kind_ != ShapeKind::gaussian) {
    throw std::logic_error("PulseShape::duration: not a gaussian shape");
  }
  return duration_;
}

double PulseShape::onset() const {
  if (kind_ != ShapeKind::step) {
    throw std::logic_error("PulseShape::onset: not a step shape");
  }
  return onset_;
}

double PulseShape::value(double t) const {
  switch (kind_) {
    case ShapeKind::gaussian: {
      const double u = t / duration_;
      return std::exp(-u * u) * kInvSqrtPi;
    }
    case ShapeKind::step:
      return t >= onset_ ? 1.0 : 0.0;
    case ShapeKind::constant:
      return 1.0;
    case ShapeKind::sampled: {
      if (t <= times_.front() || t >= times_.back()) {
        if (t == times_.front()) return values_.front();
        if (t == times_.back()) return values_.back();
        return 0.0;
      }
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - times_.begin());
      const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
      return values_[i - 1] + w * (values_[i] - values_[i - 1]);
    }
  }
  return 0.0;
}

double PulseShape::peak() const {
  switch (kind_) {
    case ShapeKind::gaussian:
      return kInvSqrtPi;
    case ShapeKind::step:
    case ShapeKind::constant:
      return 1.0;
    case ShapeKind::sampled:
      return *std::max_element(values_.begin(), values_.end());
  }
  return 0.0;
}

std::pair<double, double> PulseShape::support(double rel_floor) const {
  switch (kind_) {
    case ShapeKind::gaussian: {
      const double half = duration_ * std::sqrt(-std::log(rel_floor));
      return {-half, half};
    }
    case ShapeKind::step:
      return {onset_, kInf};
    case ShapeKind::constant:
      return {-kInf, kInf};
    case ShapeKind::sampled: {
      const double floor = rel_floor * peak();
      std::size_t lo = 0;
      std::size_t hi = values_.size() - 1;
      while (lo < hi && values_[lo] <= floor) ++lo;
      while (hi > lo && values_[hi] <= floor) --hi;
      // Widen by one node so the crossing cell is included.
      if (lo > 0) --lo;
      if (hi + 1 < values_.size()) ++hi;
      return {times_[lo], times_[hi]};
    }
  }
  return {0.0, 0.0};
}

double PulseShape::integral() const {
  switch (kind_) {
    case ShapeKind::gaussian:
      return duration_;
    case ShapeKind::step:
    case ShapeKind::constant:
      return kInf;
    case ShapeKind::sampled:
      return cum_.back();
  }
  return 0.0;
}

double PulseShape::integral_to(double t) const {
  switch (kind_) {
    case ShapeKind::gaussian:
      return 0.5 * duration_ * (1.0 + cvmem::erf(t / duration_));
    case ShapeKind::step:
      return t > onset_ ? t - onset_ : 0.0;
    case ShapeKind::constant:
      return t == -kInf ? 0.0 : kInf;
    case ShapeKind::sampled: {
      if (t <= times_.front()) return 0.0;
      if (t >= times_.back()) return cum_.back();
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - times_.begin());
      const double h = t - times_[i - 1];
      const double slope =
          (values_[i] - values_[i - 1]) / (times_[i] - times_[i - 1]);
      // Exact integral of the linear interpolant over the partial cell.
      return cum_[i - 1] + values_[i - 1] * h + 0.5 * slope * h * h;
    }
  }
  return 0.0;
}

AreaFunction::AreaFunction(PulseShape shape, double rate_scale)
    : shape_(std::move(shape)), rate_scale_(rate_scale) {
  if (!(rate_scale >= 0.0) || !std::isfinite(rate_scale)) {
    throw std::invalid_argument(
        "AreaFunction: rate_scale must be finite and >= 0");
  }
}

}  // namespace cvmem
