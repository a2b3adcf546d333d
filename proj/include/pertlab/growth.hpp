#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pertlab/energy.hpp"
#include "pertlab/extended.hpp"
#include "pertlab/kernel.hpp"
#include "pertlab/measure.hpp"
#include "pertlab/potential.hpp"
#include "pertlab/rate.hpp"
#include "pertlab/region.hpp"

namespace pertlab {

/// Everything the growth quantities and the synthesizers read.
struct Context {
  RadialModel model;
  JumpKernel kernel;
  Potential V;
  RateFunction beta;
  double lambda = 0.0;
  RegionSettings region;
  QuadratureSettings quad;
  /// Suprema over m >= n run up to horizon_factor * n.
  double horizon_factor = 4.0;
  /// Spans up to this many integers are enumerated; longer ones use a grid.
  int exact_span = 256;
  int grid_points = 256;
};

enum class Variant { super, weak };

double K_nk(const Context& c, const Extent& n, const Extent& k);
double J_nk(const Context& c, const Extent& n, const Extent& k);
double Z_n(const Context& c, const Extent& n);
double Kt_nk(const Context& c, const Extent& n, const Extent& k);
double Zt_n(const Context& c, const Extent& n);

/// A supremum over m >= n truncated at the horizon.
struct SupValue {
  LogReal value;
  /// Probes at 2^j times the horizon (j = 1..8) never exceeded the
  /// retained supremum. Evidence, not proof.
  bool tail_checked = false;
  Extent argmax;
};

/// eps_{n,k} = sup_{m>=n} beta^{-1}(1/[2 mu(rho>m-1)]) e^{K_{m,k}}
SupValue eps_nk(const Context& c, const Extent& n, const Extent& k);
/// zeta_n = sup_{m>=n} beta^{-1}(1/[2 mu(rho>m-1)]) e^{Z_{m+1}}
SupValue zeta_n(const Context& c, const Extent& n);
/// t_{i,n,k} = beta^{-1}(delta^i e^{-J_{n,k}} / 4)
LogReal t_ink(const Context& c, double i, const Extent& n, const Extent& k, double delta);

struct GrowthRow {
  double n = 0.0, k = 0.0;
  double K = 0.0, J = 0.0, Z = 0.0, Kt = 0.0, Zt = 0.0;
  SupValue eps, zeta;
  RegionEstimate gamma, eta, tilde_gamma, tilde_eta;
};

GrowthRow growth_row(const Context& c, double n, double k, Variant variant);
/// Rows over the lattice ns x ks, evaluated in parallel and returned in order.
std::vector<GrowthRow> growth_table(const Context& c, const std::vector<double>& ns, const std::vector<double>& ks,
                                    Variant variant, Exec exec = Exec::parallel);

/// c(delta) = ((sqrt(delta) - 1) / delta)^2
double c_delta(double delta);

/// n_i = ceil(a b^i), k_i = k_scale * n_i.
struct SequencePlan {
  double delta = 2.0;
  double a = 1.0;
  double b = 4.0;
  double k_scale = 1.0;
  double I_max = 1e15;
  /// Indices 1..explicit_terms are all evaluated; beyond that a geometric
  /// probe set with this ratio.
  int explicit_terms = 64;
  double probe_ratio = 1.015625;
  /// Last (A1) term below this counts as numerical support.
  double a1_threshold = 0.05;

  Extent n(double i) const;
  Extent k(double i) const;
};

struct PlanTerm {
  double i = 0.0;
  Extent n, k;
  double K = 0.0, Z = 0.0, J = 0.0;
  LogReal eps, zeta, t;
  RegionEstimate gamma, eta;
  /// 8 eps + t e^K
  LogReal A;
  /// (6 zeta gamma + t e^Z eta) delta^{i+2}
  LogReal B;
  /// zeta gamma + t e^Z eta, the (A2) summand.
  LogReal a2_term;
  bool tail_checked = true;
};

PlanTerm plan_term(const Context& c, const SequencePlan& plan, double i);

struct ConditionStatus {
  std::vector<PlanTerm> terms;
  std::string a1;   // supported | indeterminate | violated
  std::string a1p;  // supported | violated
  std::string a2;   // satisfied | supported | indeterminate
  LogReal a1_last;
  bool a1_decaying = false;
  LogReal a2_partial, a2_tail;
  /// First index after the last infinite (A2) term.
  double a2_from = 1.0;
  /// Suffix data over the probe set, used by feasible_j.
  std::vector<LogReal> sup_A, sum_B;
  std::string summary() const;
};

ConditionStatus check_condition_A(const Context& c, const SequencePlan& plan);

struct FeasibleJ {
  std::optional<double> j;
  LogReal sup_A, sum_B;
  double threshold = 0.0;
};

/// Least j with sup_{i>=j} A_i <= 1/(64 lambda) ^ c(delta) r / 16 and
/// sum_{i>=j} B_i <= 1/256.
FeasibleJ feasible_j(const Context& c, const SequencePlan& plan, const ConditionStatus& status, double r);

}  // namespace pertlab
