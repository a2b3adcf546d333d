#include "pertlab/rate.hpp"

#include <algorithm>
#include <cmath>

#include "pertlab/errors.hpp"

namespace pertlab {

RateFunction RateFunction::constant(double c) {
  if (!(c > 0.0)) throw ConfigError("constant rate must be positive");
  RateFunction b;
  b.form_ = RateForm::constant;
  b.name_ = "constant";
  b.c_ = c;
  return b;
}

RateFunction RateFunction::power(double c, double p) {
  if (!(c > 0.0 && p > 0.0)) throw ConfigError("power rate needs c > 0 and p > 0");
  RateFunction b;
  b.form_ = RateForm::power;
  b.name_ = "power";
  b.c_ = c;
  b.p_ = p;
  return b;
}

RateFunction RateFunction::exp_power(double c, double p) {
  if (!(c > 0.0 && p > 0.0)) throw ConfigError("exp_power rate needs c > 0 and p > 0");
  RateFunction b = power(c, p);
  b.form_ = RateForm::exp_power;
  b.name_ = "exp_power";
  return b;
}

RateFunction RateFunction::exp_log_power(double c, double g) {
  if (!(c > 0.0 && g > 0.0)) throw ConfigError("exp_log_power rate needs c > 0 and gamma > 0");
  RateFunction b = power(c, g);
  b.form_ = RateForm::exp_log_power;
  b.name_ = "exp_log_power";
  return b;
}

RateFunction RateFunction::table(std::vector<double> r, std::vector<double> beta, bool linear) {
  if (r.empty() || r.size() != beta.size()) throw ConfigError("rate table needs matching nonempty columns");
  RateFunction b;
  b.form_ = RateForm::table;
  b.name_ = linear ? "table_linear" : "table_step";
  b.linear_ = linear;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !(beta[i] > 0.0)) throw ConfigError("rate table entries must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw ConfigError("rate table radii must increase");
    if (i > 0 && beta[i] > beta[i - 1]) throw ConfigError("rate table must be non-increasing");
    b.lr_.push_back(std::log(r[i]));
    b.lb_.push_back(std::log(beta[i]));
  }
  return b;
}

LogReal RateFunction::operator()(LogReal r) const {
  const double lr = r.log();
  switch (form_) {
    case RateForm::constant:
      return LogReal::from_value(c_);
    case RateForm::power:
      return LogReal::from_log(std::log(c_) - p_ * lr);
    case RateForm::exp_power: {
      // log beta = c (1 + r^{-p})
      const double t = -p_ * lr;
      return LogReal::from_log(t > 700.0 ? kInf : c_ * (1.0 + std::exp(t)));
    }
    case RateForm::exp_log_power: {
      const double L = log1p_exp(-lr);  // log(1 + 1/r)
      return LogReal::from_log(std::log(c_) + c_ * std::pow(L, p_));
    }
    case RateForm::table:
      break;
  }
  if (lr < lr_.front()) return LogReal::infinity();
  const auto it = std::upper_bound(lr_.begin(), lr_.end(), lr);
  const std::size_t i = static_cast<std::size_t>(it - lr_.begin()) - 1;
  if (!linear_ || i + 1 >= lr_.size()) return LogReal::from_log(lb_[i]);
  const double w = (lr - lr_[i]) / (lr_[i + 1] - lr_[i]);
  return LogReal::from_log(lb_[i] + w * (lb_[i + 1] - lb_[i]));
}

LogReal RateFunction::inverse(LogReal s) const {
  const double ls = s.log();
  switch (form_) {
    case RateForm::constant:
      return ls >= std::log(c_) ? LogReal::zero() : LogReal::infinity();
    case RateForm::power:
      if (s.is_infinite()) return LogReal::zero();
      if (s.is_zero()) return LogReal::infinity();
      return LogReal::from_log((std::log(c_) - ls) / p_);
    case RateForm::exp_power: {
      // c (1 + r^{-p}) <= log s  iff  r >= (log s / c - 1)^{-1/p}
      if (s.is_infinite()) return LogReal::zero();
      const double q = ls / c_ - 1.0;
      if (!(q > 0.0)) return LogReal::infinity();
      return LogReal::from_log(-std::log(q) / p_);
    }
    case RateForm::exp_log_power: {
      if (s.is_infinite()) return LogReal::zero();
      const double q = (ls - std::log(c_)) / c_;
      if (!(q > 0.0)) return LogReal::infinity();
      // log(1 + 1/r) <= q^{1/g}  iff  r >= 1 / expm1(q^{1/g})
      return LogReal::from_log(-log_expm1(std::pow(q, 1.0 / p_)));
    }
    case RateForm::table:
      break;
  }
  // First knot whose value is already <= s; linear pieces are solved inside.
  for (std::size_t i = 0; i < lr_.size(); ++i) {
    if (lb_[i] <= ls) {
      if (!linear_ || i == 0) return LogReal::from_log(lr_[i]);
      const double w = (ls - lb_[i - 1]) / (lb_[i] - lb_[i - 1]);
      const double lr = lr_[i - 1] + w * (lr_[i] - lr_[i - 1]);
      return LogReal::from_log(std::min(std::max(lr, lr_[i - 1]), lr_[i]));
    }
  }
  return LogReal::infinity();
}

}  // namespace pertlab
