#pragma once

#include <cmath>
#include <compare>
#include <limits>

namespace rician {

/// Natural logarithm of a nonnegative quantity. Negative infinity encodes zero.
///
/// `*` multiplies the underlying quantities (adds logs) and `+` adds them
/// (log-add-exp, shifted by the larger operand so nothing overflows).
class LogValue {
 public:
  constexpr LogValue() = default;

  static constexpr LogValue from_log(double log_value) { return LogValue(log_value); }
  static LogValue from_linear(double value) { return LogValue(std::log(value)); }
  static constexpr LogValue zero() { return LogValue(-std::numeric_limits<double>::infinity()); }
  static constexpr LogValue one() { return LogValue(0.0); }

  constexpr double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  bool is_zero() const { return std::isinf(log_) && log_ < 0; }

  friend LogValue operator*(LogValue a, LogValue b) { return LogValue(a.log_ + b.log_); }
  friend LogValue operator/(LogValue a, LogValue b) { return LogValue(a.log_ - b.log_); }
  friend LogValue operator+(LogValue a, LogValue b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = a.log_ > b.log_ ? a.log_ : b.log_;
    const double lo = a.log_ > b.log_ ? b.log_ : a.log_;
    return LogValue(hi + std::log1p(std::exp(lo - hi)));
  }

  friend constexpr auto operator<=>(LogValue a, LogValue b) { return a.log_ <=> b.log_; }
  friend constexpr bool operator==(LogValue a, LogValue b) { return a.log_ == b.log_; }

 private:
  constexpr explicit LogValue(double v) : log_(v) {}
  double log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace rician
