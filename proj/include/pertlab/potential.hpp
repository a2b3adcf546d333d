#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pertlab/extended.hpp"
#include "pertlab/measure.hpp"

namespace pertlab {

enum class ExtremaMode { monotone_radial, segments, grid };

/// Perturbation V = V0 + K0 with ball-extrema evaluators.
///
/// Radial forms are evaluated at |x|; the sawtooth and grid forms are
/// functions of the signed coordinate in dimension 1.
class Potential {
 public:
  static Potential zero();
  static Potential constant(double c);
  /// eps * log log(e + r)
  static Potential loglog(double eps);
  /// eps * log(1 + r)
  static Potential log1p(double eps);
  /// c * r^p
  static Potential power(double c, double p);
  /// eps * log log(e + r) + log psi(r), psi = (1 + log(1+r)) ^ e^{phi},
  /// phi(r) = phi_scale * log(1 + r).
  static Potential loglog_psi(double eps, double phi_scale);
  /// eps * log(1 + r) + phi_scale * log(1 + log(1 + r))
  static Potential log1p_phi(double eps, double phi_scale);
  /// a * cos(omega x), extrema on a grid of spacing h.
  static Potential cosine(double a, double omega, double h);
  /// L (n+1)^{kappa-1} (2n + 1 - 2x/H) on [nH, (n+1)H), n >= 1, and 0 elsewhere.
  static Potential sawtooth(double H, double kappa, double L);
  /// Arbitrary V0 of the signed coordinate; extrema on a grid of spacing h
  /// (h <= 0 leaves the resolution undeclared).
  static Potential custom(std::function<double(double)> v0, double h, std::string label = {});

  /// Sets K0 = -log mu(e^{V0}). Throws NonNormalizableError on divergence.
  Potential normalized(const RadialModel& model, double rel_tol = 1e-11) const;

  const std::string& label() const { return label_; }
  ExtremaMode mode() const { return mode_; }
  bool radial() const { return radial_; }
  bool is_zero() const { return zero_ && K0_ == 0.0; }
  bool is_constant() const { return zero_; }
  double K0() const { return K0_; }
  /// +1 nondecreasing in r, -1 nonincreasing, 0 neither.
  int monotone() const { return monotone_; }
  /// Sawtooth parameters when present.
  std::optional<std::array<double, 3>> sawtooth_params() const { return saw_; }

  /// V0(x) + K0 at a signed point (dimension 1) or radius.
  double operator()(double x) const { return v0_(x) + K0_; }
  double base(double x) const { return v0_(x); }

  /// sup and inf of V over {|x| <= R}.
  double ball_sup(double R) const;
  double ball_inf(double R) const;
  double ball_sup(const Extent& R) const;
  double ball_inf(const Extent& R) const;

  /// Signed locations in [-R, R] where V is not smooth.
  std::vector<double> breakpoints(double R) const;
  /// Radius beyond which the quadrature of e^{V} mu needs no further breaks.
  double break_horizon() const { return horizon_; }

  /// log mu(e^{scale V}) with K0 included.
  double log_mu_exp(const RadialModel& model, double scale = 1.0, double rel_tol = 1e-11) const;
  /// log mu_V(rho > t).
  double log_muV_tail(const RadialModel& model, double t, double rel_tol = 1e-11) const;

  /// Declared variation constant kappa1 with |V(x)-V(y)| <= kappa1 (1 ^ |x-y|).
  std::optional<double> variation() const { return kappa1_; }

 private:
  double sup_base(double R) const;
  double inf_base(double R) const;
  double radial_at_log(double log_r) const;

  std::string label_;
  ExtremaMode mode_ = ExtremaMode::monotone_radial;
  bool radial_ = true;
  bool zero_ = false;
  int monotone_ = 0;
  double K0_ = 0.0;
  double h_ = 0.0;
  double period_ = 0.0;
  double horizon_ = 0.0;
  double spacing_ = 0.0;
  std::optional<double> kappa1_;
  std::optional<std::array<double, 3>> saw_;
  std::function<double(double)> v0_;
  std::function<double(double)> v0_at_log_;
};

}  // namespace pertlab
