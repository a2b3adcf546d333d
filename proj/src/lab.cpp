#include "pertlab/lab.hpp"

#include <algorithm>
#include <cmath>

#include "pertlab/energy.hpp"
#include "pertlab/errors.hpp"

namespace pertlab {

namespace {

struct Moments {
  double E = 0.0, E_err = 0.0;
  double m1 = 0.0, m1_err = 0.0;
  double m2 = 0.0, m2_err = 0.0;
  double var = 0.0, var_err = 0.0;
  double log_E = -kInf, log_var = -kInf, log_m1 = -kInf;
  /// sup |f - mu_V(f)|
  double centred_sup = 0.0;
};

double val(const LogQuadResult& q) { return std::exp(q.log_value); }
double err(const LogQuadResult& q) { return std::exp(q.log_error); }

Moments moments(const Context& c, const TestFunction& f, bool need_var) {
  Moments m;
  const auto E = log_energy_V(c.model, c.kernel, c.V, f, c.quad);
  const auto m1 = log_muV_moment(c.model, c.V, f, 1.0, c.quad);
  const auto m2 = log_muV_moment(c.model, c.V, f, 2.0, c.quad);
  m.log_E = E.log_value;
  m.log_m1 = m1.log_value;
  m.E = val(E), m.E_err = err(E);
  m.m1 = val(m1), m.m1_err = err(m1);
  m.m2 = val(m2), m.m2_err = err(m2);
  if (need_var) {
    const auto v = log_var_muV(c.model, c.V, f, c.quad);
    m.log_var = v.log_value;
    m.var = val(v), m.var_err = err(v);
    const double mean = muV_mean(c.model, c.V, f, c.quad).value();
    m.centred_sup = std::max(f.max_value() - mean, mean - f.min_value());
  }
  return m;
}

// x * rate without overflow when x = 0.
double times_rate(LogReal rate, double x) {
  if (x == 0.0) return 0.0;
  return (rate * LogReal::from_value(x)).value();
}

ResidualReport make(const std::string& tag, double r, LogReal rate, double lhs, double rhs, double tol, double ebar) {
  ResidualReport rep;
  rep.inequality = tag;
  rep.r = r;
  rep.rate_value = rate;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = rhs - lhs;
  rep.tolerance = tol;
  rep.error_bar = ebar;
  judge(rep);
  return rep;
}

}  // namespace

void judge(ResidualReport& rep) {
  if (std::isnan(rep.residual) || std::isnan(rep.error_bar)) {
    rep.verdict = "indeterminate";
  } else if (rep.rhs == kInf) {
    rep.verdict = "vacuous";
  } else {
    rep.verdict = rep.residual >= -(rep.tolerance + rep.error_bar) ? "pass" : "fail";
  }
}

ResidualReport super_residual(const Context& c, const TestFunction& f, double r, LogReal rate, double tol) {
  try {
    const Moments m = moments(c, f, false);
    const double rhs = r * m.E + times_rate(rate, m.m1 * m.m1);
    const double ebar = r * m.E_err + times_rate(rate, 2.0 * m.m1 * m.m1_err) + m.m2_err;
    return make("super", r, rate, m.m2, rhs, tol, ebar);
  } catch (const PrecisionError& e) {
    ResidualReport rep;
    rep.inequality = "super";
    rep.r = r;
    rep.rate_value = rate;
    rep.verdict = "indeterminate";
    rep.note = e.what();
    return rep;
  }
}

ResidualReport weak_residual(const Context& c, const TestFunction& f, double r, LogReal rate, double tol) {
  try {
    const Moments m = moments(c, f, true);
    const double rhs = times_rate(rate, m.E) + r * m.centred_sup * m.centred_sup;
    const double ebar = times_rate(rate, m.E_err) + m.var_err;
    return make("weak", r, rate, m.var, rhs, tol, ebar);
  } catch (const PrecisionError& e) {
    ResidualReport rep;
    rep.inequality = "weak";
    rep.r = r;
    rep.rate_value = rate;
    rep.verdict = "indeterminate";
    rep.note = e.what();
    return rep;
  }
}

ResidualReport defective_residual(const Context& c, const TestFunction& f, double C1, LogReal C2, double tol) {
  const Moments m = moments(c, f, false);
  const double rhs = C1 * m.E + times_rate(C2, m.m1 * m.m1);
  const double ebar = C1 * m.E_err + times_rate(C2, 2.0 * m.m1 * m.m1_err) + m.m2_err;
  return make("defective", C1, C2, m.m2, rhs, tol, ebar);
}

double log_rayleigh(const Context& c, const TestFunction& f) {
  const auto v = log_var_muV(c.model, c.V, f, c.quad);
  if (v.log_value == -kInf) throw UndefinedRatioError("zero variance: the Rayleigh quotient is undefined");
  const auto E = log_energy_V(c.model, c.kernel, c.V, f, c.quad);
  return E.log_value - v.log_value;
}

SweepResult poincare_disproof_sweep(const Context& c, double H, double kappa, double L, const std::vector<double>& ns) {
  SweepResult out;
  for (double n : ns) {
    const TestFunction f = sawtooth_exp(H, kappa, L, n);
    SweepPoint p;
    p.n = n;
    const auto v = log_var_muV(c.model, c.V, f, c.quad);
    if (v.log_value == -kInf) throw UndefinedRatioError("zero variance at n = " + std::to_string(n));
    p.log_var = v.log_value;
    p.log_energy = log_energy_V(c.model, c.kernel, c.V, f, c.quad).log_value;
    p.log_rayleigh = p.log_energy - p.log_var;
    out.points.push_back(p);
  }
  out.strictly_decreasing = out.points.size() > 1;
  for (std::size_t i = 1; i < out.points.size(); ++i)
    if (!(out.points[i].log_rayleigh < out.points[i - 1].log_rayleigh)) out.strictly_decreasing = false;
  const std::size_t N = out.points.size();
  if (N < 2) {
    out.slope = std::nan("");
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const SweepPoint& p : out.points) {
    sx += p.n, sy += p.log_rayleigh, sxx += p.n * p.n, sxy += p.n * p.log_rayleigh;
  }
  out.slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  return out;
}

ProbeResult sharpness_probe(const Context& c, const RateFunction& candidate, const std::vector<FamilySpec>& family,
                            ProbeMode mode, const std::vector<double>& r_grid, double tol) {
  ProbeResult out;
  out.verdict = "inconclusive";
  for (const FamilySpec& spec : family) {
    const TestFunction f = make_family(spec);
    Moments m;
    try {
      m = moments(c, f, mode == ProbeMode::weak);
    } catch (const PrecisionError&) {
      continue;
    }
    ResidualReport worst;
    worst.residual = kInf;
    for (double r : r_grid) {
      const LogReal rate = candidate(LogReal::from_value(r));
      ResidualReport rep;
      if (mode == ProbeMode::super) {
        rep = make("super", r, rate, m.m2, r * m.E + times_rate(rate, m.m1 * m.m1), tol,
                   r * m.E_err + times_rate(rate, 2.0 * m.m1 * m.m1_err) + m.m2_err);
      } else {
        rep = make("weak", r, rate, m.var, times_rate(rate, m.E) + r * m.centred_sup * m.centred_sup, tol,
                   times_rate(rate, m.E_err) + m.var_err);
      }
      if (rep.residual < worst.residual) worst = rep;
    }
    worst.note = family_name(spec.kind) + " n=" + std::to_string(spec.n);
    out.worst.push_back(worst);
    if (worst.verdict == "fail" && !out.n) {
      out.n = spec.n;
      out.r = worst.r;
      out.residual = worst.residual;
      out.verdict = "violation";
      break;
    }
  }
  return out;
}

std::pair<ResidualReport, ResidualReport> lemma_split_check(const Context& c, const TestFunction& f, double n,
                                                            double k, double s, double rel_tol) {
  const GrowthRow g = growth_row(c, n, k, Variant::super);
  const Moments m = moments(c, f, false);
  const double sup2 = f.sup_norm() * f.sup_norm();
  const auto outer = log_muV_moment(c.model, c.V, f, 2.0, c.quad, std::make_pair(n, kInf));
  const auto inner = log_muV_moment(c.model, c.V, f, 2.0, c.quad, std::make_pair(0.0, n));
  const double eps = g.eps.value.value(), zeta = g.zeta.value.value(), lam = c.lambda;

  ResidualReport a;
  {
    const double lhs = val(outer);
    const double rhs = 12.0 * eps * m.E + 128.0 * lam * eps * m.m2 + 96.0 * zeta * g.gamma.value * sup2;
    const double ebar = err(outer) + 12.0 * eps * m.E_err + 128.0 * lam * eps * m.m2_err +
                        96.0 * zeta * g.gamma.stderr_abs * sup2;
    a = make("lemma-split-outer", s, g.eps.value, lhs, rhs, rel_tol * lhs, ebar);
    if (!std::isfinite(eps) || !std::isfinite(zeta)) a.verdict = "vacuous";
  }
  ResidualReport b;
  {
    const double eK = std::exp(g.K), eZ = std::exp(g.Z);
    const LogReal bs = c.beta(LogReal::from_value(s)) * LogReal::from_log(g.J);
    const double lhs = val(inner);
    const double rhs = 2.0 * s * eK * m.E + 16.0 * lam * s * eK * m.m2 + 16.0 * s * eZ * g.eta.value * sup2 +
                       times_rate(bs, m.m1 * m.m1);
    const double ebar = err(inner) + 2.0 * s * eK * m.E_err + 16.0 * lam * s * eK * m.m2_err +
                        16.0 * s * eZ * g.eta.stderr_abs * sup2 + times_rate(bs, 2.0 * m.m1 * m.m1_err);
    b = make("lemma-split-inner", s, bs, lhs, rhs, rel_tol * lhs, ebar);
  }
  return {a, b};
}

std::pair<ResidualReport, ResidualReport> truncation_sum_check(const Context& c, const TestFunction& f, double delta,
                                                               int j, double rel_tol) {
  auto energy = [&](const TestFunction& g, double& e) {
    const auto q = log_energy_V(c.model, c.kernel, c.V, g, c.quad);
    e += err(q);
    return val(q);
  };
  const double level = std::pow(delta, 0.5 * j);
  double ebar1 = 0.0, ebar2 = 0.0;
  double sum = 0.0;
  for (int i = j; std::pow(delta, 0.5 * i) < f.max_value(); ++i) {
    const double lo = std::pow(delta, 0.5 * i), hi = std::pow(delta, 0.5 * (i + 1));
    sum += energy(f.clipped(lo, hi - lo), ebar1);
  }
  const TestFunction above = f.clipped(level, kInf);
  const double e_above = energy(above, ebar1);
  ebar2 += ebar1;
  const double e_below = energy(combine(f, 1.0, above, -1.0), ebar2);
  const double e_f = energy(f, ebar2);
  ResidualReport a = make("truncation-sum", delta, LogReal::zero(), sum, e_above, rel_tol * e_above, ebar1);
  ResidualReport b =
      make("truncation-split", delta, LogReal::zero(), e_above + e_below, e_f, rel_tol * e_f, ebar2);
  if (sum == 0.0) a.note = "no level below the sup norm";
  return {a, b};
}

}  // namespace pertlab
