#include "pertlab/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pertlab/extended.hpp"

namespace pertlab {

namespace {

constexpr double kLogSqrtPi = 0.57236494292470008707;

// Modified Lentz evaluation of the continued fraction for Gamma(a, x),
// returns log of the fraction part: Gamma(a,x) = e^{-x} x^a * cf.
double log_gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::log(h);
}

// Dawson-type ratio D(u) = e^{-u^2} int_0^u e^{t^2} dt by its asymptotic
// series; accurate to double precision for u >= 6.
double dawson_asymptotic(double u) {
  const double inv = 1.0 / (2.0 * u * u);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * inv;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / (2.0 * u);
}

}  // namespace

double log_erfc(double x) {
  if (x < 5.0) return std::log(boost::math::erfc(x));
  // erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  double tail = x;
  for (int k = 80; k >= 1; --k) tail = x + 0.5 * k / tail;
  return -x * x - kLogSqrtPi - std::log(tail);
}

double log_upper_gamma(double a, double x) {
  if (x <= 0.0) return std::lgamma(a);
  if (x > a + 1.0 && x > 30.0) return -x + a * std::log(x) + log_gamma_cf(a, x);
  if (a <= 0.0) throw std::domain_error("log_upper_gamma: a must be positive for small x");
  return std::lgamma(a) + std::log(boost::math::gamma_q(a, x));
}

double log_expint_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_expint_e1: x must be positive");
  if (x < 30.0) return std::log(boost::math::expint(1, x));
  return -x + log_gamma_cf(0.0, x);
}

double log_int_exp_square(double p, double q) {
  if (!(q > p)) return -kInf;
  if (p >= 0.0 && 2.0 * q * (q - p) < 2.0) {
    // Short stretch: the integrand varies by at most e^2, so a fixed
    // Gauss-Legendre rule is exact to rounding and keeps relative accuracy
    // as q - p -> 0.
    const double shift = q * q;
    auto g = [shift](double u) { return std::exp(u * u - shift); };
    return shift + std::log(boost::math::quadrature::gauss<double, 20>::integrate(g, p, q));
  }
  if (p >= 6.0) {
    const double lq = q * q + std::log(dawson_asymptotic(q));
    const double lp = p * p + std::log(dawson_asymptotic(p));
    return log_sub_exp(lq, lp);
  }
  // Bounded stretch below 6, integrated directly with a shift to avoid overflow.
  const double hi = std::min(q, 6.0);
  const double shift = std::max(p * p, hi * hi);
  auto g = [shift](double u) { return std::exp(u * u - shift); };
  double err = 0.0;
  const double part = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, p, hi, 12, 1e-14, &err);
  double result = shift + std::log(part);
  if (q > 6.0) result = log_add_exp(result, log_int_exp_square(6.0, q));
  return result;
}

}  // namespace pertlab
