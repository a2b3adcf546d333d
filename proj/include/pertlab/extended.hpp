#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pertlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a == kInf || b == kInf) return kInf;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// log(exp(a) - exp(b)) for a >= b.
inline double log_sub_exp(double a, double b) {
  if (b == -kInf) return a;
  if (b > a) throw std::domain_error("log_sub_exp: negative difference");
  if (b == a) return -kInf;
  const double d = b - a;
  return a + (d > -0.6931471805599453 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d)));
}

/// log(1 + exp(x)).
inline double log1p_exp(double x) {
  if (x > 35.0) return x + std::exp(-x);
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

/// log(exp(x) - 1) for x > 0.
inline double log_expm1(double x) {
  if (x > 35.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

/// Nonnegative extended real stored by its natural logarithm.
///
/// Zero is log = -inf and +infinity is log = +inf. Products follow the
/// measure-theoretic convention 0 * inf = 0.
class LogReal {
 public:
  constexpr LogReal() = default;

  static constexpr LogReal from_log(double lg) {
    LogReal r;
    r.log_ = lg;
    return r;
  }
  static LogReal from_value(double v) {
    if (!(v >= 0.0)) throw std::domain_error("LogReal: negative or NaN value");
    return from_log(std::log(v));
  }
  static constexpr LogReal zero() { return LogReal{}; }
  static constexpr LogReal one() { return from_log(0.0); }
  static constexpr LogReal infinity() { return from_log(kInf); }

  double log() const { return log_; }
  /// exp(log); may overflow to inf for finite but huge values.
  double value() const { return std::exp(log_); }
  bool is_zero() const { return log_ == -kInf; }
  bool is_infinite() const { return log_ == kInf; }
  bool is_finite() const { return log_ < kInf; }

  friend LogReal operator*(LogReal a, LogReal b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
  }
  friend LogReal operator/(LogReal a, LogReal b) {
    if (a.is_zero()) return zero();
    if (b.is_zero()) return infinity();
    if (b.is_infinite()) {
      if (a.is_infinite()) throw std::domain_error("LogReal: inf / inf");
      return zero();
    }
    return from_log(a.log_ - b.log_);
  }
  friend LogReal operator+(LogReal a, LogReal b) { return from_log(log_add_exp(a.log_, b.log_)); }
  LogReal& operator+=(LogReal b) { return *this = *this + b; }
  LogReal& operator*=(LogReal b) { return *this = *this * b; }

  /// Multiply by a nonnegative ordinary scalar.
  LogReal scaled(double c) const { return *this * from_value(c); }

  friend bool operator<(LogReal a, LogReal b) { return a.log_ < b.log_; }
  friend bool operator>(LogReal a, LogReal b) { return a.log_ > b.log_; }
  friend bool operator<=(LogReal a, LogReal b) { return a.log_ <= b.log_; }
  friend bool operator>=(LogReal a, LogReal b) { return a.log_ >= b.log_; }
  friend bool operator==(LogReal a, LogReal b) { return a.log_ == b.log_; }

 private:
  double log_ = -kInf;
};

inline LogReal max(LogReal a, LogReal b) { return a < b ? b : a; }
inline LogReal min(LogReal a, LogReal b) { return a < b ? a : b; }

/// Positive magnitude (radius or index) that may exceed the double range.
///
/// `value` is exact while representable; `log` is always valid. Radii such
/// as n_i = ceil(a b^i) for i ~ 1e9 only exist through `log`.
struct Extent {
  double value = 0.0;
  double log = -kInf;

  static Extent of(double v) {
    if (!(v >= 0.0)) throw std::domain_error("Extent: negative");
    return Extent{v, std::log(v)};
  }
  static Extent from_log(double lg) { return Extent{std::exp(lg), lg}; }

  /// True when `value` carries the full magnitude.
  bool exact() const { return log < 700.0; }

  /// this + c, c may be negative as long as the result stays positive.
  Extent plus(double c) const {
    if (exact()) return of(value + c);
    return Extent{kInf, log + std::log1p(c * std::exp(-log))};
  }
  Extent times(double c) const {
    if (exact() && std::isfinite(value * c)) return of(value * c);
    return Extent{kInf, log + std::log(c)};
  }
  friend bool operator<(const Extent& a, const Extent& b) { return a.log < b.log; }
};

/// a + b + c.
inline Extent add(const Extent& a, const Extent& b, double c = 0.0) {
  if (a.exact() && b.exact()) return Extent::of(a.value + b.value + c);
  return Extent::from_log(log_add_exp(a.log, b.log)).plus(c);
}

}  // namespace pertlab
