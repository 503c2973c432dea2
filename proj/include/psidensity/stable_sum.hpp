#pragma once

#include <cmath>
#include <limits>

namespace psidensity {

// Neumaier-compensated running sum. Deterministic for a fixed add order.
class StableSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double log_add(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// log(1 - e^x) for x < 0, stable near both ends.
inline double log1m_exp(double x) {
  if (x >= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x > -0.6931471805599453)  // -log 2
    return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

// Streaming log-sum-exp of positive terms given by their logarithms,
// rescaled against a running maximum.
class LogSumExp {
public:
  void add_log(double a) {
    if (empty_) {
      max_ = a;
      scaled_ = 1.0;
      empty_ = false;
      return;
    }
    if (a <= max_) {
      scaled_ += std::exp(a - max_);
    } else {
      scaled_ = scaled_ * std::exp(max_ - a) + 1.0;
      max_ = a;
    }
  }

  bool empty() const { return empty_; }

  double log_value() const {
    if (empty_) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(scaled_);
  }

private:
  double max_ = 0.0;
  double scaled_ = 0.0;
  bool empty_ = true;
};

}  // namespace psidensity
