#include "pertlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pertlab/errors.hpp"
#include "pertlab/special.hpp"

namespace pertlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

RadialProfile RadialProfile::stable(double alpha, int m) {
  RadialProfile p;
  p.kind = "stable";
  p.alpha = alpha;
  p.tail_index = alpha;
  const double e = m + alpha;
  p.log_u = [e](double r) { return -e * std::log1p(r); };
  p.log_u_at_log = [e](double u) { return -e * log1p_exp(u); };
  p.log_tail_integral = [alpha](double t, double log_t, int m) {
    if (m != 1) return kNaN;
    const double l1p = std::isfinite(t) ? std::log1p(t) : log1p_exp(log_t);
    return -alpha * l1p - std::log(alpha);
  };
  return p;
}

RadialProfile RadialProfile::log_stable(double alpha, int m) {
  RadialProfile p;
  p.kind = "log_stable";
  p.alpha = alpha;
  p.tail_index = alpha;
  const double e = m + alpha;
  p.log_u = [e](double r) { return -e * std::log1p(r) - std::log(std::log(M_E + r)); };
  p.log_u_at_log = [e](double u) { return -e * log1p_exp(u) - std::log(log_add_exp(1.0, u)); };
  // For log t >= 40 the density is r^{-(1+alpha)}/log r to within e^{-40},
  // whose tail integral is E_1(alpha log t).
  p.log_tail_integral = [alpha](double, double log_t, int m) {
    if (m != 1 || log_t < 40.0) return kNaN;
    return log_expint_e1(alpha * log_t);
  };
  return p;
}

RadialProfile RadialProfile::stretched_exp(double kappa) {
  RadialProfile p;
  p.kind = "stretched_exp";
  p.kappa = kappa;
  p.tail_index = 16.0;
  p.log_u = [kappa](double r) { return -std::pow(r, kappa); };
  p.log_u_at_log = [kappa](double u) { return -std::exp(kappa * u); };
  p.log_tail_integral = [kappa](double, double log_t, int m) {
    if (log_t == -kInf) return std::lgamma(m / kappa) - std::log(kappa);
    const double x = std::exp(kappa * log_t);
    if (!std::isfinite(x)) return -kInf;
    return log_upper_gamma(m / kappa, x) - std::log(kappa);
  };
  return p;
}

RadialProfile RadialProfile::uniform(double radius) {
  RadialProfile p;
  p.kind = "uniform";
  p.radius = radius;
  p.tail_index = 16.0;
  p.breakpoints = {radius};
  p.log_u = [radius](double r) { return r <= radius ? 0.0 : -kInf; };
  const double lr = std::log(radius);
  p.log_u_at_log = [lr](double u) { return u <= lr ? 0.0 : -kInf; };
  p.log_tail_integral = [radius](double t, double, int m) {
    if (t >= radius) return -kInf;
    return std::log((std::pow(radius, m) - std::pow(t, m)) / m);
  };
  return p;
}

RadialProfile RadialProfile::custom(std::function<double(double)> log_u, double tail_index) {
  RadialProfile p;
  p.kind = "custom";
  p.tail_index = tail_index;
  p.log_u = log_u;
  p.log_u_at_log = [log_u](double u) { return log_u(std::exp(u)); };
  return p;
}

RadialModel RadialModel::normalize(int m, RadialProfile profile, std::string label) {
  if (m < 1) throw ConfigError("dimension must be a positive integer");
  RadialModel model;
  model.m_ = m;
  model.profile_ = std::move(profile);
  model.label_ = std::move(label);
  model.log_omega_ = std::log(2.0) + 0.5 * m * std::log(M_PI) - std::lgamma(0.5 * m);
  LogQuadOptions opt;
  opt.rel_tol = 1e-12;
  try {
    auto total = model.log_half_line([](double) { return 0.0; }, {}, m - 1, opt);
    if (!std::isfinite(total.log_value)) throw NonNormalizableError("radial profile has zero or infinite mass");
    model.log_c_ = -(model.log_omega_ + total.log_value);
  } catch (const DivergenceError& e) {
    throw NonNormalizableError(std::string("radial profile is not integrable: ") + e.what());
  }
  return model;
}

RadialModel RadialModel::abstract(std::function<double(double)> tail, std::string label) {
  RadialModel model;
  model.tail_override_ = std::move(tail);
  model.label_ = std::move(label);
  model.profile_.kind = "abstract";
  return model;
}

LogQuadResult RadialModel::log_half_line(const std::function<double(double)>& log_h, const std::vector<double>& breaks,
                                         int power, const LogQuadOptions& opt) const {
  double r1 = 1.0;
  for (double b : breaks) r1 = std::max(r1, b);
  std::vector<double> pts{0.0, r1};
  for (double b : breaks)
    if (b > 0.0 && b < r1) pts.push_back(b);
  for (double b : profile_.breakpoints)
    if (b > 0.0 && b < r1) pts.push_back(b);
  const auto& log_u = profile_.log_u;
  auto near = [&](double r) {
    const double lh = log_h(r);
    if (lh == -kInf) return -kInf;
    double v = lh + log_u(r);
    if (power > 0) v += power * std::log(r);
    return v;
  };
  auto res = log_integrate(near, pts, opt);
  const auto& log_u_at_log = profile_.log_u_at_log;
  auto far = [&](double u) {
    const double lh = log_h(std::exp(u));
    if (lh == -kInf) return -kInf;
    return lh + log_u_at_log(u) + (power + 1) * u;
  };
  std::vector<double> ubreaks;
  for (double b : profile_.breakpoints)
    if (b > r1) ubreaks.push_back(std::log(b));
  auto tail = log_integrate_to_infinity(far, std::log(r1), ubreaks, 1.0, opt);
  res.log_value = log_add_exp(res.log_value, tail.log_value);
  res.log_error = log_add_exp(res.log_error, tail.log_error);
  res.evaluations += tail.evaluations;
  res.converged = res.converged && tail.converged;
  return res;
}

double RadialModel::log_unnormalized_tail(double t, double log_t) const {
  if (profile_.log_tail_integral) {
    const double v = profile_.log_tail_integral(t, log_t, m_);
    if (!std::isnan(v)) return v;
  }
  LogQuadOptions opt;
  opt.rel_tol = 1e-11;
  const int power = m_ - 1;
  const auto& log_u_at_log = profile_.log_u_at_log;
  auto far = [&](double u) { return log_u_at_log(u) + (power + 1) * u; };
  std::vector<double> ubreaks;
  for (double b : profile_.breakpoints)
    if (b > 0.0 && std::log(b) > std::max(log_t, 0.0)) ubreaks.push_back(std::log(b));
  if (log_t >= 0.0) return log_integrate_to_infinity(far, log_t, ubreaks, 1.0, opt).log_value;
  std::vector<double> pts{t, 1.0};
  for (double b : profile_.breakpoints)
    if (b > t && b < 1.0) pts.push_back(b);
  const auto& log_u = profile_.log_u;
  auto near = [&](double r) { return log_u(r) + (power > 0 ? power * std::log(r) : 0.0); };
  const double a = log_integrate(near, pts, opt).log_value;
  return log_add_exp(a, log_integrate_to_infinity(far, 0.0, ubreaks, 1.0, opt).log_value);
}

double RadialModel::log_tail(double t) const {
  if (t <= 0.0) return 0.0;
  if (tail_override_) return std::log(tail_override_(t));
  if (!std::isfinite(t)) return -kInf;
  return std::min(0.0, log_omega_ + log_c_ + log_unnormalized_tail(t, std::log(t)));
}

double RadialModel::tail(double t) const { return std::exp(log_tail(t)); }

double RadialModel::log_tail_at_log(double log_t) const {
  if (log_t < 700.0) return log_tail(std::exp(log_t));
  if (tail_override_) return std::log(tail_override_(kInf));
  return std::min(0.0, log_omega_ + log_c_ + log_unnormalized_tail(kInf, log_t));
}

double RadialModel::log_density(double r) const {
  if (tail_override_) throw HypothesisError("abstract model has no density");
  return log_c_ + profile_.log_u(r);
}

LogQuadResult RadialModel::log_integrate_line(const std::function<double(double)>& log_h, std::vector<double> breaks,
                                              const LogQuadOptions& opt) const {
  if (tail_override_) throw HypothesisError("abstract model cannot be integrated against");
  if (m_ != 1) throw HypothesisError("line integration requires dimension 1");
  std::vector<double> pos, neg;
  for (double b : breaks) {
    if (b > 0.0) pos.push_back(b);
    if (b < 0.0) neg.push_back(-b);
  }
  auto right = log_half_line(log_h, pos, 0, opt);
  auto left = log_half_line([&](double r) { return log_h(-r); }, neg, 0, opt);
  LogQuadResult res;
  res.log_value = log_c_ + log_add_exp(right.log_value, left.log_value);
  res.log_error = log_c_ + log_add_exp(right.log_error, left.log_error);
  res.evaluations = right.evaluations + left.evaluations;
  res.converged = right.converged && left.converged;
  return res;
}

LogQuadResult RadialModel::log_integrate_radial(const std::function<double(double)>& log_g, std::vector<double> breaks,
                                                const LogQuadOptions& opt) const {
  if (tail_override_) throw HypothesisError("abstract model cannot be integrated against");
  auto res = log_half_line(log_g, breaks, m_ - 1, opt);
  res.log_value += log_omega_ + log_c_;
  res.log_error += log_omega_ + log_c_;
  return res;
}

}  // namespace pertlab
