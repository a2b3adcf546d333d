#pragma once

#include <string>

#include "pertlab/test_function.hpp"

namespace pertlab {

enum class FamilyKind { ramp, sawtooth_exp, cutoff_l, cutoff_g, truncation };

struct FamilySpec {
  FamilyKind kind = FamilyKind::ramp;
  double n = 1.0;
  // sawtooth_exp
  double H = 5.0, kappa = 2.0, L = 20.0;
  // truncation of the ramp n scaled to max `scale`
  double delta = 2.0;
  int i = 0;
  double scale = 1.0;
};

FamilyKind family_kind(const std::string& name);
std::string family_name(FamilyKind k);

/// 0 on |x| <= n, 1 on |x| >= 2n, linear in between.
TestFunction ramp(double n);
/// 1 on n <= |x| <= n+1, 0 off n-1 < |x| < n+2, cubic smoothsteps between.
TestFunction cutoff_l(double n);
/// 1 on |x| <= n, 0 on |x| >= n+1, cubic smoothstep between.
TestFunction cutoff_g(double n);
/// int_{Hn+1}^x exp(y^kappa - V(y)) dy normalized to reach 1 at H(n+1)-1,
/// V the sawtooth with parameters (H, kappa, L). Values and differences are
/// carried in logs.
TestFunction sawtooth_exp(double H, double kappa, double L, double n);

TestFunction make_family(const FamilySpec& spec);

/// (f - delta^{i/2})^+ ^ (delta^{(i+1)/2} - delta^{i/2})
double truncate(double f, double delta, int i);

/// sum_{i>=k} f_{delta,i}^2 - c(delta) ((f - delta^{k/2})^+)^2, which is >= 0.
double truncation_slack(double f, double delta, int k);

}  // namespace pertlab
