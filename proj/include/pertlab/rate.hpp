#pragma once

#include <string>
#include <vector>

#include "pertlab/extended.hpp"

namespace pertlab {

enum class RateForm { constant, power, exp_power, exp_log_power, table };

/// Non-increasing rate function beta: (0, inf) -> (0, inf].
///
/// Arguments and values are LogReal so that radii like e^{-1000} and rates
/// like e^{10^6} stay representable.
class RateFunction {
 public:
  /// beta = c
  static RateFunction constant(double c);
  /// beta = c r^{-p}
  static RateFunction power(double c, double p);
  /// beta = exp(c (1 + r^{-p}))
  static RateFunction exp_power(double c, double p);
  /// beta = c exp(c log^g(1 + 1/r))
  static RateFunction exp_log_power(double c, double g);
  /// Tabulated (r_i, beta_i), r increasing and beta non-increasing; +inf
  /// below r_0, constant beyond the last knot. `linear` interpolates log beta
  /// against log r, otherwise the table is a right-continuous step function.
  static RateFunction table(std::vector<double> r, std::vector<double> beta, bool linear);

  RateForm form() const { return form_; }
  const std::string& name() const { return name_; }
  double c() const { return c_; }
  double p() const { return p_; }

  LogReal operator()(LogReal r) const;
  double log_at(double r) const { return (*this)(LogReal::from_value(r)).log(); }
  /// inf{r > 0 : beta(r) <= s}, with inf of the empty set = inf.
  LogReal inverse(LogReal s) const;

 private:
  RateForm form_ = RateForm::constant;
  std::string name_;
  double c_ = 1.0, p_ = 1.0;
  bool linear_ = false;
  std::vector<double> lr_, lb_;
};

}  // namespace pertlab
