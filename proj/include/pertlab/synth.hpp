#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pertlab/growth.hpp"

namespace pertlab {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Parameters at which an infimum was attained; unused fields stay NaN.
struct Witness {
  double n = kNaN, k = kNaN, j = kNaN, s = kNaN, rprime = kNaN;
  /// log s, kept for witnesses below the double range.
  double log_s = kNaN;
};

struct RatePoint {
  double r = 0.0;
  LogReal value = LogReal::infinity();
  Witness witness;
  std::string status;
  /// Largest relative standard error of any sampled region integral in the
  /// constraint at the witness; 0 when nothing was sampled.
  double stderr_bar = 0.0;
  std::string note;
};

struct GridSettings {
  int per_decade = 64;
  int decades = 8;
  bool refine = true;
};

struct SuperFiniteSettings {
  int n_max = 64;
  GridSettings grid;
};

/// Cached eps, K, J over n = 1..n_max at k = ceil(k0).
struct FiniteTable {
  double k = 1.0;
  std::vector<double> n, K, J;
  std::vector<SupValue> eps;
};

FiniteTable finite_table(const Context& c, int n_max, Exec exec = Exec::parallel);

/// inf (1 + 8 lambda r') e^{J} beta(s) over 8 eps + s e^K <= r'/(2 + 16 lambda r').
RatePoint beta_V_super_finite(const Context& c, const FiniteTable& table, double r, const GridSettings& g = {});
RatePoint beta_V_super_finite(const Context& c, double r, const SuperFiniteSettings& s = {});

/// 2 delta^j with j = feasible_j.
RatePoint beta_V_super_infinite(const Context& c, const SequencePlan& plan, const ConditionStatus& status, double r);

struct DefectiveConstants {
  double C1 = 0.0;
  LogReal C2;
  Witness witness;
  std::string note;
};

/// Finite range: first n with 8 eps < 1/(32 lambda), theta = 1/2.
std::optional<DefectiveConstants> defective_finite(const Context& c, const FiniteTable& table);
/// Infinite range: (r, 2 delta^j) at the smallest r of the grid with a feasible j.
std::optional<DefectiveConstants> defective_infinite(const Context& c, const SequencePlan& plan,
                                                     const ConditionStatus& status, const std::vector<double>& r_grid);

struct VariationCheck {
  long samples = 0;
  long violations = 0;
  double worst_excess = 0.0;
};

/// Samples pairs within the jump range and counts violations of
/// |V(x) - V(y)| <= kappa1 (1 ^ |x - y|).
VariationCheck check_variation(const Context& c, double kappa1, long samples, std::uint64_t seed);

/// kappa2 = mu(e^{-2V}); throws HypothesisError when it diverges.
double log_kappa2(const Context& c);

/// inf over s' in (0, s] of 16 kappa2 beta(r)^3 (4 + lambda kappa1^2 s'),
/// r = s' e^{-kappa1} / (4 + lambda kappa1^2 s').
RatePoint beta_V_variation(const Context& c, double kappa1, double log_kappa2, double s, const GridSettings& g = {});

struct WeakSettings {
  int n_per_decade = 128;
  double n_max = 1e11;
  int k_per_decade = 16;
};

/// Precomputed pieces of the weak constraint on the (n, k) lattice.
class WeakSearch {
 public:
  WeakSearch(const Context& c, const WeakSettings& s = {});
  RatePoint operator()(double r);
  const std::vector<double>& n_grid() const { return n_; }
  const std::vector<double>& k_grid() const { return k_; }

 private:
  const Context& c_;
  std::vector<double> n_, k_;
  std::vector<double> log_muV_tail_, Zt_, sup_n_;
  std::vector<double> log_gamma_, log_tail_nk_, log_eta_bound_, inf_nk_;
  std::vector<RegionEstimate> eta_cache_;
  std::vector<char> eta_done_;
  double log_eta(std::size_t a, std::size_t b, double& rel_se);
};

/// Running minimum from the smallest r up; the inequality at r' < r also
/// holds at r, so the envelope is still a valid rate.
std::vector<LogReal> monotone_envelope(const std::vector<RatePoint>& curve);

}  // namespace pertlab
