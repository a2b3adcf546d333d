#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pertlab/extended.hpp"

namespace pertlab {

/// Bounded function on R (signed coordinate) described piece by piece.
///
/// `breaks` are sorted points where f is not smooth; piece i is the interval
/// between breaks[i-1] and breaks[i], with the two unbounded pieces at the
/// ends. Pieces flagged constant let inner integrals use closed-form kernel
/// masses.
class TestFunction {
 public:
  static TestFunction constant(double c);
  /// Linear interpolation of (xs, ys), constant beyond the first and last knot.
  static TestFunction piecewise_linear(std::vector<double> xs, std::vector<double> ys, std::string label = {});
  /// Smooth function without constant pieces (e.g. sin).
  static TestFunction smooth(std::function<double(double)> f, std::optional<double> lipschitz,
                             std::optional<double> sup_norm, std::string label = {});
  /// Fully specified function; log_abs and log_abs_diff may be empty.
  static TestFunction custom(std::function<double(double)> f, std::function<double(double)> log_abs,
                             std::function<double(double, double)> log_abs_diff, std::vector<double> breaks,
                             std::vector<char> constant_piece, std::string label = {});

  double operator()(double x) const { return f_(x); }
  /// log |f(x)|, exact for log-domain families.
  double log_abs(double x) const { return log_abs_ ? log_abs_(x) : std::log(std::fabs(f_(x))); }
  /// log |f(x) - f(y)|.
  double log_abs_diff(double x, double y) const {
    return log_abs_diff_ ? log_abs_diff_(x, y) : std::log(std::fabs(f_(x) - f_(y)));
  }

  const std::vector<double>& breaks() const { return breaks_; }
  bool piece_constant(std::size_t i) const { return constant_[i] != 0; }
  std::size_t piece_of(double x) const;
  bool is_constant() const;

  /// Value range; used for sup norms and truncation.
  double min_value() const { return lo_; }
  double max_value() const { return hi_; }
  double sup_norm() const { return sup_ ? *sup_ : std::max(std::fabs(lo_), std::fabs(hi_)); }
  std::optional<double> declared_sup_norm() const { return sup_; }
  std::optional<double> lipschitz() const { return lip_; }
  /// Smallest R with f constant outside [-R, R]; inf when none.
  double support_radius() const { return support_; }
  const std::string& label() const { return label_; }

  /// Knots of a piecewise-linear function (empty otherwise).
  const std::vector<double>& knots_x() const { return kx_; }
  const std::vector<double>& knots_y() const { return ky_; }

  /// a f + b; keeps the log-domain difference when available.
  TestFunction affine(double a, double b) const;
  /// (f - c)^+ ^ w for piecewise-linear f.
  TestFunction clipped(double c, double w) const;

  TestFunction& set_range(double lo, double hi) {
    lo_ = lo;
    hi_ = hi;
    return *this;
  }
  TestFunction& set_lipschitz(std::optional<double> l) {
    lip_ = l;
    return *this;
  }
  TestFunction& set_label(std::string s) {
    label_ = std::move(s);
    return *this;
  }

 private:
  std::function<double(double)> f_;
  std::function<double(double)> log_abs_;
  std::function<double(double, double)> log_abs_diff_;
  std::vector<double> breaks_;
  std::vector<char> constant_;
  std::vector<double> kx_, ky_;
  double lo_ = 0.0, hi_ = 0.0;
  std::optional<double> sup_, lip_;
  double support_ = kInf;
  std::string label_;
};

}  // namespace pertlab
