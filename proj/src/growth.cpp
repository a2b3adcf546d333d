#include "pertlab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pertlab/parallel.hpp"

namespace pertlab {

namespace {

// a + c for c >= 0, huge a kept through its log.
Extent shift(const Extent& a, double c) { return a.plus(c); }


double log_ball_tail(const Context& c, const Extent& m) {
  // mu(rho > m - 1)
  if (m.exact()) return c.model.log_tail(std::max(0.0, m.value - 1.0));
  return c.model.log_tail(m.plus(-1.0));
}

// beta^{-1}(1 / [2 mu(rho > m-1)]) as a log.
double log_inv_half_tail(const Context& c, const Extent& m) {
  const double s = -std::log(2.0) - log_ball_tail(c, m);
  return c.beta.inverse(LogReal::from_log(s)).log();
}

// Candidate m in [n, M]: every integer when the span is short, a geometric
// grid otherwise.
std::vector<Extent> sup_points(const Context& c, const Extent& n) {
  std::vector<Extent> out;
  const double lM = n.log + std::log(c.horizon_factor);
  if (n.exact() && std::exp(lM) - n.value <= c.exact_span) {
    const double M = std::floor(std::exp(lM) + 1e-9);
    for (double m = n.value; m <= M; m += 1.0) out.push_back(Extent::of(m));
    return out;
  }
  const int g = std::max(2, c.grid_points);
  for (int j = 0; j < g; ++j) {
    const double lg = n.log + (lM - n.log) * j / (g - 1);
    if (n.exact() && lg < 700.0) {
      const double v = j == 0 ? n.value : std::round(std::exp(lg));
      if (!out.empty() && v <= out.back().value) continue;
      out.push_back(Extent::of(v));
    } else {
      out.push_back(Extent::from_log(lg));
    }
  }
  return out;
}

template <class Term>
SupValue sup_over(const Context& c, const Extent& n, Term term) {
  SupValue best;
  best.value = LogReal::zero();
  best.argmax = n;
  for (const Extent& m : sup_points(c, n)) {
    const LogReal v = LogReal::from_log(term(m));
    if (v > best.value) {
      best.value = v;
      best.argmax = m;
    }
  }
  best.tail_checked = true;
  const double lM = n.log + std::log(c.horizon_factor);
  for (int j = 1; j <= 8; ++j) {
    const double lg = lM + j * std::log(2.0);
    const Extent m = lg < 700.0 ? Extent::of(std::round(std::exp(lg))) : Extent::from_log(lg);
    if (LogReal::from_log(term(m)) > best.value) best.tail_checked = false;
  }
  return best;
}

// Sum of count terms x0, x0 rho, ..., all in logs.
double log_geometric_sum(double log_x0, double log_rho, double count) {
  if (count <= 0.0 || log_x0 == -kInf) return -kInf;
  if (std::fabs(log_rho) < 1e-12) return log_x0 + std::log(count);
  if (log_rho > 0.0) {
    // x0 (rho^count - 1) / (rho - 1)
    return log_x0 + log_expm1(count * log_rho) - log_expm1(log_rho);
  }
  const double a = -log_rho;
  // x0 (1 - rho^count) / (1 - rho)
  const double num = count * a > 35.0 ? 0.0 : std::log(-std::expm1(-count * a));
  return log_x0 + num - std::log(-std::expm1(-a));
}

// Sum of the integer-indexed terms i0 <= i < i1 interpolating log-linearly
// between x(i0) and x(i1).
double log_gap_sum(double i0, double lx0, double i1, double lx1) {
  const double gap = i1 - i0;
  if (lx0 == -kInf && lx1 == -kInf) return -kInf;
  if (lx0 == kInf || lx1 == kInf) return kInf;
  if (lx0 == -kInf || lx1 == -kInf) {
    // One endpoint vanishes; bound by the other endpoint per index.
    return std::max(lx0, lx1) + std::log(gap);
  }
  return log_geometric_sum(lx0, (lx1 - lx0) / gap, gap);
}

}  // namespace

double K_nk(const Context& c, const Extent& n, const Extent& k) {
  return c.V.ball_sup(shift(n, 2.0)) - c.V.ball_inf(add(n, k, 2.0));
}

double J_nk(const Context& c, const Extent& n, const Extent& k) {
  return c.V.ball_sup(shift(n, 1.0)) - 2.0 * c.V.ball_inf(add(n, k, 2.0));
}

double Z_n(const Context& c, const Extent& n) { return c.V.ball_sup(shift(n, 1.0)); }

double Kt_nk(const Context& c, const Extent& n, const Extent& k) {
  return c.V.ball_sup(n) - c.V.ball_inf(add(n, k, 1.0));
}

double Zt_n(const Context& c, const Extent& n) { return c.V.ball_sup(n); }

SupValue eps_nk(const Context& c, const Extent& n, const Extent& k) {
  return sup_over(c, n, [&](const Extent& m) {
    const double inv = log_inv_half_tail(c, m);
    return inv == -kInf ? -kInf : inv + K_nk(c, m, k);
  });
}

SupValue zeta_n(const Context& c, const Extent& n) {
  return sup_over(c, n, [&](const Extent& m) {
    const double inv = log_inv_half_tail(c, m);
    return inv == -kInf ? -kInf : inv + Z_n(c, shift(m, 1.0));
  });
}

LogReal t_ink(const Context& c, double i, const Extent& n, const Extent& k, double delta) {
  const double ls = i * std::log(delta) - J_nk(c, n, k) - std::log(4.0);
  return c.beta.inverse(LogReal::from_log(ls));
}

GrowthRow growth_row(const Context& c, double n, double k, Variant variant) {
  GrowthRow row;
  row.n = n;
  row.k = k;
  const Extent en = Extent::of(n), ek = Extent::of(k);
  row.K = K_nk(c, en, ek);
  row.J = J_nk(c, en, ek);
  row.Z = Z_n(c, en);
  row.Kt = Kt_nk(c, en, ek);
  row.Zt = Zt_n(c, en);
  RegionSettings rs = c.region;
  rs.exec = Exec::serial;
  if (variant == Variant::super) {
    row.eps = eps_nk(c, en, ek);
    row.zeta = zeta_n(c, en);
    row.gamma = region_gamma(c.model, c.kernel, en, ek, rs);
    row.eta = region_eta(c.model, c.kernel, en, ek, rs);
  } else {
    row.tilde_gamma = region_tilde_gamma(c.model, c.kernel, ek, rs);
    row.tilde_eta = region_tilde_eta(c.model, c.kernel, en, ek, rs);
  }
  return row;
}

std::vector<GrowthRow> growth_table(const Context& c, const std::vector<double>& ns, const std::vector<double>& ks,
                                    Variant variant, Exec exec) {
  const std::size_t nk = ks.size();
  auto rows = map_indexed<GrowthRow>(exec, ns.size() * nk,
                                     [&](std::size_t i) { return growth_row(c, ns[i / nk], ks[i % nk], variant); });
  // eps and zeta are suprema over m >= n, so a later row bounds an earlier one.
  if (variant == Variant::super && std::is_sorted(ns.begin(), ns.end())) {
    for (std::size_t a = ns.size(); a-- > 1;) {
      for (std::size_t b = 0; b < nk; ++b) {
        GrowthRow& lo = rows[(a - 1) * nk + b];
        const GrowthRow& hi = rows[a * nk + b];
        if (hi.eps.value > lo.eps.value) lo.eps = hi.eps;
        if (hi.zeta.value > lo.zeta.value) lo.zeta = hi.zeta;
      }
    }
  }
  return rows;
}

double c_delta(double delta) {
  const double q = (std::sqrt(delta) - 1.0) / delta;
  return q * q;
}

Extent SequencePlan::n(double i) const {
  const double lg = std::log(a) + i * std::log(b);
  if (lg < 36.0) return Extent::of(std::ceil(a * std::pow(b, i) - 1e-9));
  return Extent::from_log(lg);
}

Extent SequencePlan::k(double i) const {
  const Extent e = n(i);
  if (e.exact() && e.value < 1e15) return Extent::of(std::max(1.0, std::ceil(e.value * k_scale - 1e-9)));
  return e.times(k_scale);
}

PlanTerm plan_term(const Context& c, const SequencePlan& plan, double i) {
  PlanTerm t;
  t.i = i;
  t.n = plan.n(i);
  t.k = plan.k(i);
  t.K = K_nk(c, t.n, t.k);
  t.J = J_nk(c, t.n, t.k);
  t.Z = Z_n(c, t.n);
  const SupValue e = eps_nk(c, t.n, t.k);
  const SupValue z = zeta_n(c, t.n);
  t.eps = e.value;
  t.zeta = z.value;
  t.tail_checked = e.tail_checked && z.tail_checked;
  t.t = t_ink(c, i, t.n, t.k, plan.delta);
  RegionSettings rs = c.region;
  rs.exec = Exec::serial;
  t.gamma = region_gamma(c.model, c.kernel, t.n, t.k, rs);
  t.eta = region_eta(c.model, c.kernel, t.n, t.k, rs);
  const LogReal gam = LogReal::from_log(t.gamma.log_value);
  const LogReal eta = LogReal::from_log(t.eta.log_value);
  t.A = t.eps.scaled(8.0) + t.t * LogReal::from_log(t.K);
  t.a2_term = t.zeta * gam + t.t * LogReal::from_log(t.Z) * eta;
  const LogReal weight = LogReal::from_log((i + 2.0) * std::log(plan.delta));
  t.B = (t.zeta * gam).scaled(6.0) * weight + t.t * LogReal::from_log(t.Z) * eta * weight;
  return t;
}

namespace {

std::vector<double> probe_indices(const SequencePlan& plan) {
  std::vector<double> out;
  const double top = std::floor(plan.I_max);
  for (int i = 1; i <= plan.explicit_terms && i <= top; ++i) out.push_back(i);
  double i = out.empty() ? 1.0 : out.back();
  while (i < top) {
    i = std::min(top, std::max(i + 1.0, std::ceil(i * plan.probe_ratio)));
    out.push_back(i);
  }
  return out;
}

// log of a geometric tail sum beyond the last probe, from the last two.
double log_tail_beyond(const std::vector<double>& idx, const std::vector<double>& lx) {
  const std::size_t p = idx.size();
  if (p < 2) return kInf;
  const double a = lx[p - 2], b = lx[p - 1];
  if (b == -kInf) return -kInf;
  if (a == kInf || b == kInf) return kInf;
  if (a == -kInf) return kInf;
  const double rho = (b - a) / (idx[p - 1] - idx[p - 2]);
  if (rho >= 0.0) return kInf;
  // sum_{m>=1} b rho^m
  return b + rho - std::log(-std::expm1(rho));
}

}  // namespace

ConditionStatus check_condition_A(const Context& c, const SequencePlan& plan) {
  ConditionStatus st;
  const std::vector<double> idx = probe_indices(plan);
  st.terms = map_indexed<PlanTerm>(Exec::parallel, idx.size(), [&](std::size_t p) { return plan_term(c, plan, idx[p]); });
  const std::size_t P = st.terms.size();
  if (P == 0) {
    st.a1 = "indeterminate";
    st.a1p = "violated";
    st.a2 = "indeterminate";
    return st;
  }

  // (A1): trend of the last quarter of the probes.
  st.a1_last = st.terms.back().A;
  const std::size_t from = P - std::min(P, std::max<std::size_t>(2, P / 4));
  bool decaying = true;
  for (std::size_t p = from + 1; p < P; ++p)
    if (st.terms[p].A > st.terms[p - 1].A) decaying = false;
  st.a1_decaying = decaying && st.a1_last < st.terms[from].A;
  if (st.a1_last.is_infinite()) {
    st.a1 = "violated";
  } else if (st.a1_last.log() < std::log(plan.a1_threshold) && st.a1_decaying) {
    st.a1 = "supported";
  } else if (!st.a1_decaying && st.a1_last >= st.terms[from].A && st.a1_last.log() >= std::log(plan.a1_threshold)) {
    st.a1 = "violated";
  } else {
    st.a1 = "indeterminate";
  }
  // (A1'): eps + t stays bounded over the tail probes.
  bool bounded = true;
  LogReal first = st.terms[from].eps + st.terms[from].t;
  for (std::size_t p = from; p < P; ++p) {
    const LogReal v = st.terms[p].eps + st.terms[p].t;
    if (v.is_infinite() || v.log() > first.log() + std::log(4.0)) bounded = false;
  }
  st.a1p = bounded ? "supported" : "violated";

  // Suffix data. Gaps between probes are filled by log-linear interpolation.
  std::vector<double> la2(P), lB(P);
  for (std::size_t p = 0; p < P; ++p) {
    la2[p] = st.terms[p].a2_term.log();
    lB[p] = st.terms[p].B.log();
  }
  st.sup_A.assign(P, LogReal::zero());
  st.sum_B.assign(P, LogReal::zero());
  LogReal runA = LogReal::zero();
  LogReal runB = LogReal::from_log(log_tail_beyond(idx, lB));
  LogReal run2 = LogReal::from_log(log_tail_beyond(idx, la2));
  st.a2_tail = run2;
  LogReal partial = LogReal::zero();
  for (std::size_t p = P; p-- > 0;) {
    runA = max(runA, st.terms[p].A);
    if (p + 1 < P) {
      runB += LogReal::from_log(log_gap_sum(idx[p], lB[p], idx[p + 1], lB[p + 1]));
      partial += LogReal::from_log(log_gap_sum(idx[p], la2[p], idx[p + 1], la2[p + 1]));
    } else {
      runB += st.terms[p].B;
      partial += st.terms[p].a2_term;
    }
    st.sup_A[p] = runA;
    st.sum_B[p] = runB;
  }
  st.a2_partial = partial;
  // Leading terms with t = inf (beta^{-1} of a small argument) only affect
  // indices below any feasible j; the sum is judged from the first index
  // after them.
  std::size_t lead = 0;
  for (std::size_t p = 0; p < P; ++p)
    if (st.terms[p].a2_term.is_infinite()) lead = p + 1;
  st.a2_from = lead < P ? st.terms[lead].i : kInf;
  bool all_zero = true;
  for (const PlanTerm& t : st.terms)
    if (!t.a2_term.is_zero()) all_zero = false;
  LogReal from_sum = st.a2_tail;
  for (std::size_t p = lead; p + 1 < P; ++p) from_sum += LogReal::from_log(log_gap_sum(idx[p], la2[p], idx[p + 1], la2[p + 1]));
  if (lead < P) from_sum += st.terms[P - 1].a2_term;
  if (all_zero && c.kernel.finite_range()) {
    st.a2 = "satisfied";
  } else if (lead < P && from_sum.is_finite()) {
    st.a2 = "supported";
  } else {
    st.a2 = "indeterminate";
  }
  return st;
}

std::string ConditionStatus::summary() const {
  std::ostringstream os;
  os << "A1=" << a1 << " A1'=" << a1p << " A2=" << a2;
  if (a2_from > 1.0 && std::isfinite(a2_from)) os << " (from i=" << a2_from << ")";
  return os.str();
}

FeasibleJ feasible_j(const Context& c, const SequencePlan& plan, const ConditionStatus& st, double r) {
  FeasibleJ out;
  const double lam = c.lambda;
  out.threshold = std::min(lam > 0.0 ? 1.0 / (64.0 * lam) : kInf, c_delta(plan.delta) * r / 16.0);
  if (!(out.threshold > 0.0) || st.terms.empty()) return out;
  const LogReal thr = LogReal::from_value(out.threshold);
  const LogReal cap = LogReal::from_value(1.0 / 256.0);
  const std::size_t P = st.terms.size();
  std::size_t p = 0;
  while (p < P && !(st.sup_A[p] <= thr && st.sum_B[p] <= cap)) ++p;
  if (p == P) return out;
  double j = st.terms[p].i;
  LogReal supA = st.sup_A[p], sumB = st.sum_B[p];
  if (p > 0) {
    // Bisect inside the probe gap, evaluating terms directly.
    double lo = st.terms[p - 1].i, hi = j;
    const double ip = j, lBp = st.terms[p].B.log();
    while (hi - lo > 1.0) {
      const double mid = std::floor((lo + hi) / 2.0);
      const PlanTerm t = plan_term(c, plan, mid);
      const LogReal a = max(t.A, st.sup_A[p]);
      const LogReal b = st.sum_B[p] + LogReal::from_log(log_gap_sum(mid, t.B.log(), ip, lBp));
      if (a <= thr && b <= cap) {
        hi = mid;
        supA = a;
        sumB = b;
      } else {
        lo = mid;
      }
    }
    j = hi;
  }
  out.j = j;
  out.sup_A = supA;
  out.sum_B = sumB;
  return out;
}

}  // namespace pertlab
