#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pertlab/families.hpp"
#include "pertlab/growth.hpp"

namespace pertlab {

struct ResidualReport {
  std::string inequality;  // super | weak | defective | lemma-split-outer | ...
  double r = 0.0;
  LogReal rate_value;
  double lhs = 0.0, rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  /// Propagated quadrature error of lhs and rhs.
  double error_bar = 0.0;
  std::string verdict;  // pass | fail | indeterminate | vacuous
  std::string note;
};

/// pass iff residual >= -(tolerance + error_bar).
void judge(ResidualReport& rep);

/// r E_V(f) + rate mu_V(|f|)^2 - mu_V(f^2)
ResidualReport super_residual(const Context& c, const TestFunction& f, double r, LogReal rate, double tol = 1e-9);
/// rate E_V(f) + r ||f - mu_V(f)||_inf^2 - Var_{mu_V}(f)
ResidualReport weak_residual(const Context& c, const TestFunction& f, double r, LogReal rate, double tol = 1e-9);
/// C1 E_V(f) + C2 mu_V(|f|)^2 - mu_V(f^2)
ResidualReport defective_residual(const Context& c, const TestFunction& f, double C1, LogReal C2,
                                  double tol = 1e-9);

/// log E_V(f) - log Var_{mu_V}(f); UndefinedRatioError on zero variance.
double log_rayleigh(const Context& c, const TestFunction& f);

struct SweepPoint {
  double n = 0.0;
  double log_rayleigh = 0.0;
  double log_energy = 0.0, log_var = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  bool strictly_decreasing = false;
  /// Least-squares slope of log rayleigh against n; NaN with fewer than two points.
  double slope = 0.0;
};

SweepResult poincare_disproof_sweep(const Context& c, double H, double kappa, double L, const std::vector<double>& ns);

enum class ProbeMode { super, weak };

struct ProbeResult {
  std::optional<double> n;  // first family index with a violation
  double r = 0.0;
  double residual = 0.0;
  std::string verdict;  // violation | inconclusive
  std::vector<ResidualReport> worst;  // most negative residual per n
};

/// Sweeps the family over ns; for each member the residual is minimized over
/// r_grid and the first n with a residual below -tolerance is returned.
ProbeResult sharpness_probe(const Context& c, const RateFunction& candidate, const std::vector<FamilySpec>& family,
                            ProbeMode mode, const std::vector<double>& r_grid, double tol = 1e-9);

/// Lemma checks at (n, k, s): mu_V(f^2 1_{rho>=n}) and mu_V(f^2 1_{rho<=n})
/// against their growth-quantity bounds.
std::pair<ResidualReport, ResidualReport> lemma_split_check(const Context& c, const TestFunction& f, double n,
                                                            double k, double s, double rel_tol = 1e-3);

/// sum_{i>=j} E_V(f_{delta,i}) <= E_V((f - delta^{j/2})^+) and
/// E_V((f - delta^{j/2})^+) + E_V(f ^ delta^{j/2}) <= E_V(f).
std::pair<ResidualReport, ResidualReport> truncation_sum_check(const Context& c, const TestFunction& f, double delta,
                                                               int j, double rel_tol = 1e-6);

}  // namespace pertlab
