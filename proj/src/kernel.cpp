#include "pertlab/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "pertlab/errors.hpp"
#include "pertlab/quadrature.hpp"

namespace pertlab {

namespace {
double log_unit_sphere(int m) { return std::log(2.0) + 0.5 * m * std::log(M_PI) - std::lgamma(0.5 * m); }
}  // namespace

JumpKernel JumpKernel::stable_like(int m, double alpha, double log_scale) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("alpha must lie in (0,2)");
  JumpKernel k;
  k.kind_ = KernelKind::stable_like;
  k.m_ = m;
  k.alpha_ = alpha;
  k.log_scale_ = log_scale;
  k.log_omega_ = log_unit_sphere(m);
  k.label_ = "stable_like";
  return k;
}

JumpKernel JumpKernel::truncated(int m, double alpha, double log_scale, double range) {
  if (!(range > 0.0)) throw ConfigError("kernel range must be positive");
  JumpKernel k = stable_like(m, alpha, log_scale);
  k.kind_ = KernelKind::truncated;
  k.range_ = range;
  k.label_ = "truncated";
  return k;
}

JumpKernel JumpKernel::custom(std::function<double(double, double)> log_q_density, std::optional<double> range,
                              std::string label, double singularity) {
  JumpKernel k;
  k.kind_ = KernelKind::custom;
  k.alpha_ = singularity;
  k.log_qd_ = std::move(log_q_density);
  k.range_ = range;
  k.label_ = label.empty() ? "custom" : std::move(label);
  return k;
}

JumpKernel JumpKernel::abstract(double lambda, std::optional<double> range) {
  JumpKernel k;
  k.kind_ = KernelKind::abstract;
  k.lambda_ = lambda;
  k.range_ = range;
  k.label_ = "abstract";
  return k;
}

double JumpKernel::log_j(double r) const {
  if (!translation()) throw HypothesisError("kernel is not translation-reduced");
  if (r <= 0.0) return kInf;
  if (range_ && r > *range_) return -kInf;
  return log_scale_ - (m_ + alpha_) * std::log(r);
}

double JumpKernel::log_q_density(double x, double y) const {
  if (kind_ == KernelKind::custom) {
    if (x == y) return -kInf;
    return log_qd_(x, y);
  }
  if (kind_ == KernelKind::abstract) throw HypothesisError("abstract kernel has no density");
  if (m_ != 1) throw HypothesisError("pointwise kernel density is only used in dimension 1");
  return log_j(std::fabs(x - y));
}

double JumpKernel::jump_mass_1d(double z1, double z2) const {
  if (!translation()) throw HypothesisError("closed-form jump mass needs a translation kernel");
  if (range_) z2 = std::min(z2, *range_);
  if (!(z2 > z1)) return 0.0;
  if (z1 <= 0.0) return kInf;
  const double hi = std::isfinite(z2) ? std::pow(z2, -alpha_) : 0.0;
  return std::exp(log_scale_) * (std::pow(z1, -alpha_) - hi) / alpha_;
}

double JumpKernel::log_mass_beyond(double k) const {
  if (!translation()) throw HypothesisError("closed-form jump mass needs a translation kernel");
  if (range_ && k >= *range_) return -kInf;
  if (k <= 0.0) return kInf;
  double v = std::pow(k, -alpha_);
  if (range_) v -= std::pow(*range_, -alpha_);
  return log_omega_ + log_scale_ + std::log(v / alpha_);
}

double JumpKernel::log_mass_beyond_at_log(double log_k) const {
  if (log_k < 700.0) return log_mass_beyond(std::exp(log_k));
  if (range_) return -kInf;
  return log_omega_ + log_scale_ - alpha_ * log_k - std::log(alpha_);
}

double lambda_bound(JumpKernel& kernel, const RadialModel& model, std::span<const double> x_grid) {
  if (kernel.kind() == KernelKind::abstract) {
    if (!kernel.lambda_cache()) throw HypothesisError("abstract kernel needs a declared lambda");
    return *kernel.lambda_cache();
  }
  LogQuadOptions opt;
  opt.rel_tol = 1e-11;
  double result = 0.0;
  try {
    if (kernel.translation()) {
      const int m = kernel.dim();
      // Near field in reflected log-radius w = -log r; far field in U = log r.
      auto near = [&](double w) { return -(2.0 + m) * w + kernel.log_j(std::exp(-w)); };
      auto far = [&](double u) { return m * u + kernel.log_j(std::exp(u)); };
      std::vector<double> nb, fb;
      if (auto r = kernel.finite_range()) {
        if (*r < 1.0) nb.push_back(-std::log(*r));
        if (*r > 1.0) fb.push_back(std::log(*r));
      }
      const double a = log_integrate_to_infinity(near, 0.0, nb, 1.0, opt).log_value;
      const double b = log_integrate_to_infinity(far, 0.0, fb, 1.0, opt).log_value;
      result = std::exp(log_unit_sphere(m) + log_add_exp(a, b));
    } else {
      if (x_grid.empty()) throw ConfigError("lambda_bound needs a nonempty x grid");
      (void)model;
      for (double x : x_grid) {
        auto side = [&](double sign) {
          auto near = [&](double w) {
            const double z = std::exp(-w);
            return -3.0 * w + kernel.log_q_density(x, x + sign * z);
          };
          auto far = [&](double u) {
            const double z = std::exp(u);
            return u + kernel.log_q_density(x, x + sign * z);
          };
          std::vector<double> nb, fb;
          if (auto r = kernel.finite_range()) {
            if (*r < 1.0) nb.push_back(-std::log(*r));
            if (*r > 1.0) fb.push_back(std::log(*r));
          }
          return log_add_exp(log_integrate_to_infinity(near, 0.0, nb, 1.0, opt).log_value,
                             log_integrate_to_infinity(far, 0.0, fb, 1.0, opt).log_value);
        };
        result = std::max(result, std::exp(log_add_exp(side(1.0), side(-1.0))));
      }
    }
  } catch (const DivergenceError& e) {
    throw InfiniteLambdaError(std::string("lambda diverges: ") + e.what());
  }
  if (!std::isfinite(result)) throw InfiniteLambdaError("lambda is infinite");
  kernel.set_lambda(result);
  return result;
}

}  // namespace pertlab
