#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "pertlab/measure.hpp"

namespace pertlab {

enum class KernelKind { stable_like, truncated, custom, abstract };

/// The jump kernel q together with the reference measure it is paired with.
///
/// stable_like and truncated kernels are translation-reduced:
/// q(x,y) mu(dy) = j(|x-y|) dy with j(r) = scale * r^{-(m+alpha)}, cut at the
/// finite range when one is set. custom kernels (m = 1) give
/// log[q(x,y) * density(y)] directly. abstract kernels only carry a declared
/// lambda and range for calculus-only scenarios.
class JumpKernel {
 public:
  static JumpKernel stable_like(int m, double alpha, double log_scale);
  static JumpKernel truncated(int m, double alpha, double log_scale, double range);
  /// `singularity` bounds the order of the diagonal singularity, as the
  /// exponent alpha of |x-y|^{-(1+alpha)}; it only steers quadrature.
  static JumpKernel custom(std::function<double(double, double)> log_q_density, std::optional<double> range,
                           std::string label = {}, double singularity = 1.5);
  static JumpKernel abstract(double lambda, std::optional<double> range);

  KernelKind kind() const { return kind_; }
  bool translation() const { return kind_ == KernelKind::stable_like || kind_ == KernelKind::truncated; }
  int dim() const { return m_; }
  double alpha() const { return alpha_; }
  double log_scale() const { return log_scale_; }
  std::optional<double> finite_range() const { return range_; }
  std::optional<double> lambda_cache() const { return lambda_; }
  void set_lambda(double v) { lambda_ = v; }
  const std::string& label() const { return label_; }

  /// log j(r) for translation kernels; -inf beyond the range.
  double log_j(double r) const;
  /// log[q(x,y) * density(y)] in dimension 1 for every kind with a density.
  double log_q_density(double x, double y) const;
  /// One-sided mass int_{z1}^{z2} j(z) dz in dimension 1, 0 <= z1 < z2 <= inf.
  double jump_mass_1d(double z1, double z2) const;
  /// log of int_{|z| > k} j(|z|) dz in R^m (translation kernels).
  double log_mass_beyond(double k) const;
  double log_mass_beyond_at_log(double log_k) const;

 private:
  KernelKind kind_ = KernelKind::abstract;
  int m_ = 1;
  double alpha_ = 0.0;
  double log_scale_ = 0.0;
  double log_omega_ = std::log(2.0);
  std::optional<double> range_;
  std::optional<double> lambda_;
  std::function<double(double, double)> log_qd_;
  std::string label_;
};

/// lambda = sup_x int (1 ^ |x-y|^2) q(x,y) mu(dy). Translation kernels use a
/// single radial integral and ignore the grid. The result is cached in the
/// kernel. Throws InfiniteLambdaError when the integral diverges.
double lambda_bound(JumpKernel& kernel, const RadialModel& model, std::span<const double> x_grid);

}  // namespace pertlab
