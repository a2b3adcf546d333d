#pragma once

namespace pertlab {

/// log erfc(x), finite for every real x (continued fraction for large x).
double log_erfc(double x);

/// log E_1(x) for x > 0.
double log_expint_e1(double x);

/// log of the integral of exp(u^2) over [p, q], p < q.
double log_int_exp_square(double p, double q);

/// log Gamma(a, x), the upper incomplete gamma function, for large x as well.
double log_upper_gamma(double a, double x);

}  // namespace pertlab
