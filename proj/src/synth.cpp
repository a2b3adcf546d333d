#include "pertlab/synth.hpp"

#include <algorithm>
#include <cmath>

#include "pertlab/errors.hpp"
#include "pertlab/parallel.hpp"
#include "pertlab/rng.hpp"

namespace pertlab {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Geometric grid 10^{m/per_decade} inside (top 10^{-decades}, top], with top itself last.
std::vector<double> log_grid_below(double log_top, const GridSettings& g) {
  const double step = std::log(10.0) / g.per_decade;
  const double lo = log_top - g.decades * std::log(10.0);
  std::vector<double> out;
  for (double m = std::floor(lo / step) + 1.0; m * step < log_top; m += 1.0) out.push_back(m * step);
  out.push_back(log_top);
  return out;
}

// Minimizes f over [a, b] by golden-section search, starting from the best grid value.
template <class F>
std::pair<double, double> golden(F f, double a, double b, double x0, double f0, int iters = 80) {
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-12 * (1.0 + std::fabs(a)); ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  double bx = x0, bf = f0;
  if (f1 < bf) bx = x1, bf = f1;
  if (f2 < bf) bx = x2, bf = f2;
  return {bx, bf};
}

double required_range(const Context& c) {
  const auto R = c.kernel.finite_range();
  if (!R) throw HypothesisError("super-finite requires a finite jump range; the kernel has infinite range");
  return *R;
}

}  // namespace

FiniteTable finite_table(const Context& c, int n_max, Exec exec) {
  FiniteTable t;
  t.k = std::max(1.0, std::ceil(required_range(c) - 1e-12));
  const Extent ek = Extent::of(t.k);
  t.n.resize(n_max);
  for (int i = 0; i < n_max; ++i) t.n[i] = i + 1;
  struct Row {
    double K, J;
    SupValue eps;
  };
  auto rows = map_indexed<Row>(exec, n_max, [&](std::size_t i) {
    const Extent en = Extent::of(t.n[i]);
    return Row{K_nk(c, en, ek), J_nk(c, en, ek), eps_nk(c, en, ek)};
  });
  for (const Row& r : rows) {
    t.K.push_back(r.K);
    t.J.push_back(r.J);
    t.eps.push_back(r.eps);
  }
  return t;
}

RatePoint beta_V_super_finite(const Context& c, const FiniteTable& t, double r, const GridSettings& g) {
  RatePoint out;
  out.r = r;
  const double lam = c.lambda;
  // log value at (n index, log r'), +inf when infeasible.
  auto eval = [&](std::size_t i, double lrp, double* log_s) {
    const LogReal e = t.eps[i].value;
    if (e.is_infinite()) return kInf;
    const double rp = std::exp(lrp);
    const double room = rp / (2.0 + 16.0 * lam * rp) - 8.0 * e.value();
    if (!(room > 0.0)) return kInf;
    const double ls = std::log(room) - t.K[i];
    if (log_s) *log_s = ls;
    return std::log1p(8.0 * lam * rp) + t.J[i] + c.beta(LogReal::from_log(ls)).log();
  };
  const std::vector<double> grid = log_grid_below(std::log(r), g);
  double best = kInf, best_lrp = 0.0;
  std::size_t best_i = 0, best_g = 0;
  for (std::size_t i = 0; i < t.n.size(); ++i) {
    for (std::size_t q = 0; q < grid.size(); ++q) {
      const double v = eval(i, grid[q], nullptr);
      if (v < best) best = v, best_i = i, best_g = q, best_lrp = grid[q];
    }
  }
  if (best == kInf) {
    out.value = LogReal::infinity();
    out.status = "infeasible";
    out.note = "inf eps_{n,k} too large";
    return out;
  }
  if (g.refine) {
    const double a = grid[best_g > 0 ? best_g - 1 : 0];
    const double b = grid[std::min(best_g + 1, grid.size() - 1)];
    if (b > a) {
      auto [x, fx] = golden([&](double x) { return eval(best_i, x, nullptr); }, a, b, best_lrp, best);
      best_lrp = x;
      best = fx;
    }
  }
  double ls = 0.0;
  eval(best_i, best_lrp, &ls);
  out.value = LogReal::from_log(best);
  out.witness.n = t.n[best_i];
  out.witness.k = t.k;
  out.witness.rprime = std::exp(best_lrp);
  out.witness.log_s = ls;
  out.witness.s = std::exp(ls);
  out.status = t.eps[best_i].tail_checked ? "supported" : "truncated";
  return out;
}

RatePoint beta_V_super_finite(const Context& c, double r, const SuperFiniteSettings& s) {
  return beta_V_super_finite(c, finite_table(c, s.n_max), r, s.grid);
}

RatePoint beta_V_super_infinite(const Context& c, const SequencePlan& plan, const ConditionStatus& st, double r) {
  RatePoint out;
  out.r = r;
  const bool supported = st.a1 == "supported" && (st.a2 == "supported" || st.a2 == "satisfied");
  out.status = supported ? "supported" : "advisory";
  const FeasibleJ fj = feasible_j(c, plan, st, r);
  if (!fj.j) {
    out.value = LogReal::infinity();
    out.note = "no feasible j up to I_max";
    return out;
  }
  const double j = *fj.j;
  out.value = LogReal::from_log(std::log(2.0) + j * std::log(plan.delta));
  out.witness.j = j;
  const Extent n = plan.n(j), k = plan.k(j);
  if (n.exact()) out.witness.n = n.value;
  if (k.exact()) out.witness.k = k.value;
  for (const PlanTerm& t : st.terms) {
    if (t.i < j) continue;
    out.stderr_bar = std::max({out.stderr_bar, t.gamma.rel_se(), t.eta.rel_se()});
  }
  if (!supported) out.note = st.summary();
  return out;
}

std::optional<DefectiveConstants> defective_finite(const Context& c, const FiniteTable& t) {
  const double lam = c.lambda;
  for (std::size_t i = 0; i < t.n.size(); ++i) {
    const LogReal e = t.eps[i].value;
    if (e.is_infinite()) continue;
    const double room = 1.0 / (32.0 * lam) - 8.0 * e.value();
    if (!(room > 0.0)) continue;
    // theta = 16 lambda (8 eps + s e^K) = 1/2
    const double se = room;
    DefectiveConstants d;
    d.C1 = 4.0 * (6.0 * e.value() + se);
    d.C2 = c.beta(LogReal::from_log(std::log(se) - t.K[i])) * LogReal::from_log(t.J[i] + std::log(2.0));
    d.witness.n = t.n[i];
    d.witness.k = t.k;
    d.witness.log_s = std::log(se) - t.K[i];
    d.witness.s = std::exp(d.witness.log_s);
    return d;
  }
  return std::nullopt;
}

std::optional<DefectiveConstants> defective_infinite(const Context& c, const SequencePlan& plan,
                                                     const ConditionStatus& st, const std::vector<double>& r_grid) {
  std::vector<double> rs = r_grid;
  std::sort(rs.begin(), rs.end());
  for (double r : rs) {
    const FeasibleJ fj = feasible_j(c, plan, st, r);
    if (!fj.j) continue;
    DefectiveConstants d;
    d.C1 = r;
    d.C2 = LogReal::from_log(std::log(2.0) + *fj.j * std::log(plan.delta));
    d.witness.j = *fj.j;
    d.note = st.summary();
    return d;
  }
  return std::nullopt;
}

VariationCheck check_variation(const Context& c, double kappa1, long samples, std::uint64_t seed) {
  const CounterRng rng(seed, fnv1a("variation"));
  const double range = c.kernel.finite_range().value_or(kInf);
  struct One {
    bool bad;
    double excess;
  };
  auto res = map_indexed<One>(Exec::parallel, samples, [&](std::size_t i) {
    // Heavy-tailed position, jump length log-uniform on [1e-3, min(range, 1e3)].
    const double u = rng.uniform(i, 0), sgn = rng.uniform(i, 1) < 0.5 ? -1.0 : 1.0;
    const double x = sgn * std::expm1(-2.0 * std::log(u));
    const double zmax = std::min(range, 1e3);
    const double z = 1e-3 * std::pow(zmax / 1e-3, rng.uniform(i, 2)) * (rng.uniform(i, 3) < 0.5 ? -1.0 : 1.0);
    const double d = std::fabs(c.V(x) - c.V(x + z));
    const double bound = kappa1 * std::min(1.0, std::fabs(z));
    const double ex = d - bound;
    return One{ex > 1e-12 * (1.0 + bound), ex};
  });
  VariationCheck out;
  out.samples = samples;
  for (const One& o : res) {
    if (o.bad) ++out.violations;
    out.worst_excess = std::max(out.worst_excess, o.excess);
  }
  return out;
}

double log_kappa2(const Context& c) {
  try {
    return c.V.log_mu_exp(c.model, -2.0);
  } catch (const NonNormalizableError& e) {
    throw HypothesisError(std::string("kappa2 = mu(e^{-2V}) diverges: ") + e.what());
  }
}

RatePoint beta_V_variation(const Context& c, double kappa1, double lk2, double s, const GridSettings& g) {
  RatePoint out;
  out.r = s;
  if (!std::isfinite(lk2)) throw HypothesisError("kappa2 = mu(e^{-2V}) is infinite");
  const double lam = c.lambda, k12 = kappa1 * kappa1;
  auto eval = [&](double lsp) {
    const double sp = std::exp(lsp);
    const double w = 4.0 + lam * k12 * sp;
    const double lr = lsp - kappa1 - std::log(w);
    return std::log(16.0) + lk2 + 3.0 * c.beta(LogReal::from_log(lr)).log() + std::log(w);
  };
  const std::vector<double> grid = log_grid_below(std::log(s), g);
  double best = kInf, best_x = grid.back();
  std::size_t best_g = grid.size() - 1;
  for (std::size_t q = grid.size(); q-- > 0;) {
    const double v = eval(grid[q]);
    if (v < best) best = v, best_x = grid[q], best_g = q;
  }
  if (g.refine && best_g + 1 < grid.size() && best_g > 0) {
    auto [x, fx] = golden(eval, grid[best_g - 1], grid[best_g + 1], best_x, best);
    best_x = x;
    best = fx;
  }
  if (best_g == 0 && grid.size() > 1) out.note = "grid infimum at the smallest s'; the infimum is approached as s' -> 0";
  out.value = LogReal::from_log(best);
  out.witness.s = std::exp(best_x);
  out.witness.log_s = best_x;
  out.status = "supported";
  return out;
}

WeakSearch::WeakSearch(const Context& c, const WeakSettings& s) : c_(c) {
  for (int m = 0;; ++m) {
    const double v = std::round(std::pow(10.0, static_cast<double>(m) / s.n_per_decade));
    if (v > s.n_max) break;
    if (v >= 2.0 && (n_.empty() || v > n_.back())) n_.push_back(v);
  }
  for (int m = 0;; ++m) {
    const double v = std::round(std::pow(10.0, static_cast<double>(m) / s.k_per_decade));
    if (v >= s.n_max) break;
    if (k_.empty() || v > k_.back()) k_.push_back(v);
  }
  const std::size_t N = n_.size(), Kn = k_.size();
  log_muV_tail_ = map_indexed<double>(Exec::parallel, N, [&](std::size_t a) { return c.V.log_muV_tail(c.model, n_[a]); });
  Zt_.resize(N);
  sup_n_.resize(N);
  for (std::size_t a = 0; a < N; ++a) {
    Zt_[a] = Zt_n(c, Extent::of(n_[a]));
    sup_n_[a] = c.V.ball_sup(n_[a]);
  }
  RegionSettings rs = c.region;
  rs.exec = Exec::serial;
  auto gam = map_indexed<RegionEstimate>(Exec::parallel, Kn,
                                         [&](std::size_t b) { return region_tilde_gamma(c.model, c.kernel, Extent::of(k_[b]), rs); });
  for (const RegionEstimate& e : gam) log_gamma_.push_back(e.log_value);
  log_tail_nk_.assign(N * Kn, kInf);
  log_eta_bound_.assign(N * Kn, kInf);
  inf_nk_.assign(N * Kn, 0.0);
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 0; b < Kn && k_[b] < n_[a]; ++b) {
      const std::size_t ab = a * Kn + b;
      log_tail_nk_[ab] = c.model.log_tail(n_[a] - k_[b]);
      inf_nk_[ab] = c.V.ball_inf(n_[a] + k_[b] + 1.0);
      // tilde eta <= mu(rho > n+k+1) sup_x int_{|x-y|>k} q mu(dy)
      if (c.kernel.finite_range() && k_[b] >= *c.kernel.finite_range()) {
        log_eta_bound_[ab] = -kInf;
      } else if (c.kernel.translation()) {
        log_eta_bound_[ab] = c.model.log_tail(n_[a] + k_[b] + 1.0) + c.kernel.log_mass_beyond(k_[b]);
      }
    }
  }
  eta_cache_.resize(N * Kn);
  eta_done_.assign(N * Kn, 0);
}

double WeakSearch::log_eta(std::size_t a, std::size_t b, double& rel_se) {
  const std::size_t ab = a * k_.size() + b;
  if (!eta_done_[ab]) {
    eta_cache_[ab] = region_tilde_eta(c_.model, c_.kernel, Extent::of(n_[a]), Extent::of(k_[b]), c_.region);
    eta_done_[ab] = 1;
  }
  rel_se = eta_cache_[ab].rel_se();
  return eta_cache_[ab].log_value;
}

RatePoint WeakSearch::operator()(double r) {
  RatePoint out;
  out.r = r;
  const std::size_t Kn = k_.size();
  const double lr2 = std::log(r / 2.0), l4lam = std::log(4.0 * c_.lambda);
  double best = kInf, best_rel = 0.0;
  std::size_t ba = 0, bb = 0;
  for (std::size_t a = 0; a < n_.size(); ++a) {
    // beta((r/8) e^{-Zt}) and the objective are non-decreasing in n and k.
    const double lbeta = c_.beta(LogReal::from_log(std::log(r / 8.0) - Zt_[a])).log();
    if (lbeta == kInf) continue;
    const double floor_obj = std::log(2.0) + lbeta + sup_n_[a] - inf_nk_[a * Kn];
    if (floor_obj >= best && k_[0] < n_[a]) break;
    const double lmu6 = std::log(6.0) + log_muV_tail_[a];
    if (lmu6 > lr2) continue;
    const double room = std::exp(lr2) - std::exp(lmu6);
    const double lcoef = std::log(2.0) + Zt_[a] + lbeta;
    for (std::size_t b = 0; b < Kn && k_[b] < n_[a]; ++b) {
      const std::size_t ab = a * Kn + b;
      const double obj = std::log(2.0) + lbeta + sup_n_[a] - inf_nk_[ab];
      if (obj >= best) continue;
      const double base = log_add_exp(log_gamma_[b], l4lam + log_tail_nk_[ab]);
      if (lcoef + base > std::log(room)) continue;
      double rel = 0.0;
      double leta = log_eta_bound_[ab];
      if (lcoef + log_add_exp(base, std::log(4.0) + leta) > std::log(room)) {
        leta = log_eta(a, b, rel);
        if (lcoef + log_add_exp(base, std::log(4.0) + leta) > std::log(room)) continue;
      }
      best = obj;
      best_rel = rel;
      ba = a;
      bb = b;
    }
  }
  if (best == kInf) {
    out.value = LogReal::infinity();
    out.status = "infeasible";
    out.note = "no feasible (n,k) on the lattice";
    return out;
  }
  out.value = LogReal::from_log(best);
  out.witness.n = n_[ba];
  out.witness.k = k_[bb];
  out.stderr_bar = best_rel;
  // Hypothesis probe at eps = r/8: the lattice infimum over the full n range
  // should undercut the one over its first half.
  auto probe = [&](std::size_t upto) {
    double m = kInf;
    for (std::size_t a = 0; a < upto; ++a) {
      const double lb = c_.beta(LogReal::from_log(std::log(r / 8.0) - Zt_[a])).log();
      for (std::size_t b = 0; b < Kn && k_[b] < n_[a]; ++b) {
        const std::size_t ab = a * Kn + b;
        const double terms = log_add_exp(log_add_exp(log_gamma_[b], log_tail_nk_[ab]),
                                         log_eta_bound_[ab] < kInf ? log_eta_bound_[ab] : -kInf);
        m = std::min(m, Zt_[a] + lb + terms);
      }
    }
    return m;
  };
  out.status = probe(n_.size()) < probe(n_.size() / 2) ? "supported" : "advisory";
  return out;
}

std::vector<LogReal> monotone_envelope(const std::vector<RatePoint>& curve) {
  std::vector<std::size_t> order(curve.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return curve[a].r < curve[b].r; });
  std::vector<LogReal> out(curve.size());
  LogReal run = LogReal::infinity();
  for (std::size_t i : order) {
    run = min(run, curve[i].value);
    out[i] = run;
  }
  return out;
}

}  // namespace pertlab
