#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pertlab/extended.hpp"
#include "pertlab/quadrature.hpp"

namespace pertlab {

/// Unnormalized radial density u(r) of a measure on R^m.
struct RadialProfile {
  std::string kind;  // stable | log_stable | stretched_exp | uniform | custom
  double alpha = 0.0;
  double kappa = 0.0;
  double radius = 0.0;
  /// log u(r) for r >= 0.
  std::function<double(double)> log_u;
  /// log u(e^U); must stay accurate for U far beyond the double range of r.
  std::function<double(double)> log_u_at_log;
  std::vector<double> breakpoints;
  /// Optional closed form of log int_t^inf u(r) r^{m-1} dr given (t, log t, m).
  /// Returns NaN when it does not apply.
  std::function<double(double, double, int)> log_tail_integral;
  /// Power-law decay index of the radial tail, used to choose Monte Carlo
  /// proposals; light tails report a large value.
  double tail_index = 4.0;

  static RadialProfile stable(double alpha, int m = 1);
  static RadialProfile log_stable(double alpha, int m = 1);
  static RadialProfile stretched_exp(double kappa);
  static RadialProfile uniform(double radius);
  static RadialProfile custom(std::function<double(double)> log_u, double tail_index = 4.0);
};

/// Probability measure on R^m with radial density c u(|x|), or an abstract
/// model that only knows its tail function.
class RadialModel {
 public:
  /// Computes c = 1 / int u(|x|) dx by radial quadrature.
  /// Throws NonNormalizableError when the integral diverges.
  static RadialModel normalize(int m, RadialProfile profile, std::string label = {});
  static RadialModel abstract(std::function<double(double)> tail, std::string label = {});

  int dim() const { return m_; }
  bool is_abstract() const { return static_cast<bool>(tail_override_); }
  double log_c() const { return log_c_; }
  double c() const { return std::exp(log_c_); }
  /// log of the surface area of the unit sphere in R^m (log 2 when m = 1).
  double log_omega() const { return log_omega_; }
  const RadialProfile& profile() const { return profile_; }
  const std::string& label() const { return label_; }

  /// mu(rho > t).
  double tail(double t) const;
  double log_tail(double t) const;
  /// log mu(rho > e^{log_t}), valid for radii beyond the double range.
  double log_tail_at_log(double log_t) const;
  double log_tail(const Extent& t) const { return t.exact() ? log_tail(t.value) : log_tail_at_log(t.log); }

  /// log of the Lebesgue density c u(r) at |x| = r.
  double log_density(double r) const;

  /// log int h dmu over R (m = 1); log_h is evaluated at signed points and
  /// breaks are signed locations where h is not smooth.
  LogQuadResult log_integrate_line(const std::function<double(double)>& log_h, std::vector<double> breaks,
                                   const LogQuadOptions& opt = {}) const;
  /// log int g(|x|) mu(dx) for a radial integrand in any dimension.
  LogQuadResult log_integrate_radial(const std::function<double(double)>& log_g, std::vector<double> breaks,
                                     const LogQuadOptions& opt = {}) const;

 private:
  double log_unnormalized_tail(double t, double log_t) const;
  LogQuadResult log_half_line(const std::function<double(double)>& log_h, const std::vector<double>& breaks,
                              int power, const LogQuadOptions& opt) const;

  int m_ = 1;
  RadialProfile profile_;
  double log_c_ = 0.0;
  double log_omega_ = 0.0;
  std::function<double(double)> tail_override_;
  std::string label_;
};

}  // namespace pertlab
