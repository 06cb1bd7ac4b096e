#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "coarsecancel/common.hpp"

namespace ccl {

// Non-negative quantities stored as natural logs. The canonical small
// cancellation constants put sinh(rho0) far beyond double range, so the
// certifier never leaves log space; 0 is log = -inf.
struct LogValue {
  double lg = -std::numeric_limits<double>::infinity();

  static LogValue from_linear(double x) {
    if (x < 0) throw error("LogValue: negative quantity");
    LogValue v;
    v.lg = (x == 0) ? -std::numeric_limits<double>::infinity() : std::log(x);
    return v;
  }
  static LogValue from_log(double lg) {
    LogValue v;
    v.lg = lg;
    return v;
  }
  static LogValue zero() { return LogValue{}; }

  bool is_zero() const { return std::isinf(lg) && lg < 0; }
  // Linear value; +inf when the magnitude exceeds double range.
  double linear() const { return std::exp(lg); }
  bool representable() const { return lg < 709.0; }

  LogValue operator*(LogValue o) const {
    if (is_zero() || o.is_zero()) return zero();
    return from_log(lg + o.lg);
  }
  LogValue operator/(LogValue o) const {
    if (o.is_zero()) throw error("LogValue: division by zero");
    if (is_zero()) return zero();
    return from_log(lg - o.lg);
  }
  LogValue operator+(LogValue o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    double hi = std::max(lg, o.lg), lo = std::min(lg, o.lg);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  LogValue sqrt() const {
    if (is_zero()) return zero();
    return from_log(lg / 2);
  }
  bool operator<(LogValue o) const { return lg < o.lg; }
  bool operator<=(LogValue o) const { return lg <= o.lg; }
  bool operator>=(LogValue o) const { return lg >= o.lg; }
  bool operator>(LogValue o) const { return lg > o.lg; }
};

// log(sinh x) for x > 0, stable across the whole range.
inline double log_sinh(double x) {
  if (x <= 0) throw error("log_sinh: needs x > 0");
  if (x > 20.0) return x - std::log(2.0) + std::log1p(-std::exp(-2 * x));
  return std::log(std::sinh(x));
}

inline LogValue sinh_log(double x) { return LogValue::from_log(log_sinh(x)); }

}  // namespace ccl
