// One PASS/FAIL line per acceptance criterion.
//
//   acceptance            run all criteria
//   acceptance 4 7        run a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "pertlab/curve.hpp"
#include "pertlab/families.hpp"
#include "pertlab/lab.hpp"
#include "pertlab/rng.hpp"
#include "pertlab/scenario.hpp"

#ifndef PERTLAB_CLI
#error "PERTLAB_CLI must point at the command-line binary"
#endif

using namespace pertlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ConfigDocument doc(const std::string& text) { return ConfigDocument::parse(text, "acceptance"); }

// Random non-increasing rate functions; beta(r) <= s right of the inverse and
// beta(r) > s left of it.
Outcome generalized_inverse() {
  const CounterRng rng(11, fnv1a("inverse"));
  long checks = 0, bad = 0;
  std::string first;
  for (int f = 0; f < 1000; ++f) {
    auto u = [&](int lane) { return rng.uniform(f, lane); };
    const double c = std::exp(-3.0 + 6.0 * u(0)), p = 0.2 + 3.0 * u(1);
    RateFunction beta = RateFunction::constant(c);
    switch (f % 5) {
      case 0: beta = RateFunction::constant(c); break;
      case 1: beta = RateFunction::power(c, p); break;
      case 2: beta = RateFunction::exp_power(c, p); break;
      case 3: beta = RateFunction::exp_log_power(c, p); break;
      default: {
        std::vector<double> r, b;
        double x = std::exp(-8.0 + 4.0 * u(2)), y = std::exp(5.0 + 10.0 * u(3));
        const int knots = 2 + static_cast<int>(8 * u(4));
        for (int i = 0; i < knots; ++i) {
          r.push_back(x);
          b.push_back(y);
          x *= 1.5 + 4.0 * u(10 + i);
          // Flat stretches are part of the contract.
          if (u(50 + i) >= 0.2) y *= 0.05 + 0.95 * u(30 + i);
        }
        beta = RateFunction::table(r, b, u(5) < 0.5);
      }
    }
    for (int q = 0; q < 8; ++q) {
      const LogReal s = LogReal::from_log(-5.0 + 40.0 * u(100 + q));
      const LogReal inv = beta.inverse(s);
      for (int t = 0; t < 8; ++t) {
        const double w = u(200 + 8 * q + t);
        double r;
        if (inv.is_infinite()) r = std::exp(-20.0 + 60.0 * w);
        else if (inv.is_zero()) r = std::exp(-40.0 + 60.0 * w);
        else r = inv.value() * std::exp((t % 2 ? 1.0 : -1.0) * (1e-6 + 3.0 * w));
        const bool right = !inv.is_infinite() && r > inv.value() + 1e-9;
        const bool left = !inv.is_zero() && (inv.is_infinite() || r < inv.value() - 1e-9);
        const LogReal b = beta(LogReal::from_value(r));
        bool ok = true;
        if (right) ok = b <= s;
        if (left) ok = b > s;
        if (right || left) ++checks;
        if (!ok) {
          ++bad;
          if (first.empty())
            first = beta.name() + " r=" + fmt("%.6g", r) + " inv=" + fmt("%.6g", inv.value()) + " s=" +
                    fmt("%.6g", s.value());
        }
      }
    }
  }
  return {bad == 0 && checks > 40000,
          std::to_string(checks) + " checks, " + std::to_string(bad) + " violations" + (first.empty() ? "" : "; " + first)};
}

Outcome truncation_lemma() {
  const CounterRng rng(12, fnv1a("truncation"));
  double worst = kInf, worst_ratio = kInf;
  long active = 0;
  for (long i = 0; i < 100000; ++i) {
    const double delta = 1.0 + 9.0 * (1.0 - rng.uniform(i, 0));  // (1, 10]
    const int k = static_cast<int>(21 * rng.uniform(i, 1));       // 0..20
    const double top = std::pow(delta, 0.5 * (k + 6));
    const double f = -1.0 + (top + 1.0) * rng.uniform(i, 2);
    const double slack = truncation_slack(f, delta, k);
    worst = std::min(worst, slack);
    const double p = std::max(f - std::pow(delta, 0.5 * k), 0.0);
    if (p > 0.0) {
      ++active;
      worst_ratio = std::min(worst_ratio, slack / (p * p));
    }
  }
  return {worst >= -1e-12, "min slack " + fmt("%.3g", worst) + "; " + std::to_string(active) +
                               " samples above delta^(k/2), min slack / ((f - delta^(k/2))^+)^2 = " +
                               fmt("%.3g", worst_ratio)};
}

Outcome lambda_closed_form() {
  const Scenario s = open_scenario("ex3_2");
  const Context c = s.context();
  const double alpha = 1.0, cst = alpha / 2.0;
  const double oracle = cst * (2.0 / (2.0 - alpha) + 2.0 / alpha);
  const double rel = std::fabs(c.lambda / oracle - 1.0);
  return {rel < 0.01, "lambda " + fmt("%.12g", c.lambda) + " oracle " + fmt("%.6g", oracle) + " rel " + fmt("%.2g", rel)};
}

Outcome fit_outcome(const RateCurve& curve, FitTransform t, double target, double tol) {
  const FitResult f = fit_exponent(curve, t);
  const bool supported = std::all_of(curve.points.begin(), curve.points.end(),
                                     [](const RatePoint& p) { return p.status == "supported"; });
  return {std::fabs(f.slope - target) <= tol,
          fit_transform_name(t) + " slope " + fmt("%.6f", f.slope) + " (target " + fmt("%g", target) + " +- " +
              fmt("%g", tol) + "), R2 " + fmt("%.6f", f.r2) + ", " + std::to_string(f.points) + " points" +
              (supported ? "" : ", some points advisory")};
}

Outcome super_infinite_exponent() {
  const Scenario s = open_scenario("ex2_3", doc("potential.eps = 0.5\ngrid.r_min = 1e-3\ngrid.r_max = 1e-1\ngrid.r_points = 9"));
  const RateCurve curve = run_rate(s, Theorem::super_infinite);
  Outcome o = fit_outcome(curve, FitTransform::loglog_log, 1.0 / (1.0 - 0.5), 0.3);
  o.detail += "; " + curve.condition;
  return o;
}

Outcome super_finite_exponent() {
  const Scenario s = open_scenario("ex2_4", doc("model.kappa = 2.0\nkernel.alpha = 0.5\npotential.p = 0.5"));
  const RateCurve curve = run_rate(s, Theorem::super_finite);
  const double kappa = 2.0;
  Outcome o = fit_outcome(curve, FitTransform::loglog_loglog, kappa / (kappa - 1.0), 0.4);
  o.detail += ", r in [" + fmt("%g", s.r_grid.front()) + ", " + fmt("%g", s.r_grid.back()) + "]";
  return o;
}

Outcome disproof() {
  const Scenario s = open_scenario("prop2_5");
  const Context c = s.context();
  const SweepResult sw = poincare_disproof_sweep(c, 5.0, 2.0, 20.0, {2, 3, 4, 5, 6, 7, 8});
  const double diff = sw.points.back().log_rayleigh - sw.points.front().log_rayleigh;
  return {sw.strictly_decreasing && diff <= -13.0,
          std::string(sw.strictly_decreasing ? "strictly decreasing" : "NOT decreasing") + ", log ratio(8) - log ratio(2) = " +
              fmt("%.4f", diff) + " (threshold -13), slope " + fmt("%.4f", sw.slope)};
}

Outcome weak_exponent() {
  const Scenario s = open_scenario("ex3_2");
  const RateCurve curve = run_rate(s, Theorem::weak);
  const double alpha = 1.0, eps = 0.5;
  return fit_outcome(curve, FitTransform::log_log, eps / (alpha - eps), 0.15);
}

Outcome lemma_split() {
  const Scenario s = open_scenario("ex2_3");
  const Context c = s.context();
  const CounterRng rng(13, fnv1a("lemma-split"));
  int checks = 0, failed = 0;
  double worst = kInf;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> xs, ys;
    const int knots = 6;
    for (int j = 0; j < knots; ++j) {
      xs.push_back(-30.0 + 60.0 * (j + rng.uniform(t, 2 * j)) / knots);
      ys.push_back(-2.0 + 4.0 * rng.uniform(t, 2 * j + 1));
    }
    const TestFunction f = TestFunction::piecewise_linear(xs, ys);
    for (double nk : {6.0, 10.0})
      for (double sv : {0.1, 1.0}) {
        const auto [outer, inner] = lemma_split_check(c, f, nk, nk, sv, 1e-3);
        for (const ResidualReport* r : {&outer, &inner}) {
          ++checks;
          if (r->verdict != "pass") ++failed;
          const double scale = std::max(std::fabs(r->lhs), std::fabs(r->rhs));
          if (scale > 0.0) worst = std::min(worst, r->residual / scale);
        }
      }
  }
  return {failed == 0 && checks == 160, std::to_string(checks) + " checks, " + std::to_string(failed) +
                                             " failed, min relative residual " + fmt("%.3g", worst)};
}

Outcome variation_reduction() {
  const Scenario s = open_scenario("lipschitz_var", doc("potential.kind = \"zero\"\nrate.form = \"power\"\nrate.c = 1.0\nrate.p = 1.0\ngrid.r = [1, 2, 4]"));
  const RateCurve curve = run_rate(s, Theorem::variation);
  double worst = 0.0;
  for (const RatePoint& p : curve.points) worst = std::max(worst, std::fabs(p.value.value() / (4096.0 / std::pow(p.r, 3)) - 1.0));
  return {worst <= 1e-6, "max relative error " + fmt("%.3g", worst) + " against 4096/s^3"};
}

Outcome toy_point() {
  const Scenario s = open_scenario("toy_dyadic", doc("grid.r = [1]"));
  const Context c = s.context();
  const RateCurve curve = run_rate(s, c, Theorem::super_finite);
  const double got = curve.points.at(0).value.value();

  // Exhaustive grid scan of the same constrained infimum.
  const FiniteTable t = finite_table(c, s.finite.n_max);
  const double r = 1.0, lam = c.lambda;
  double best = kInf;
  for (std::size_t i = 0; i < t.n.size(); ++i) {
    if (t.eps[i].value.is_infinite()) continue;
    const double e = t.eps[i].value.value();
    for (int g = 0; g <= 200000; ++g) {
      const double rp = r * std::pow(10.0, -6.0 * g / 200000.0);
      const double room = rp / (2.0 + 16.0 * lam * rp) - 8.0 * e;
      if (!(room > 0.0)) continue;
      const double sv = room * std::exp(-t.K[i]);
      const double v = (1.0 + 8.0 * lam * rp) * std::exp(t.J[i]) * c.beta(LogReal::from_value(sv)).value();
      best = std::min(best, v);
    }
  }
  const double rel = std::fabs(got / 64.016 - 1.0), rel_scan = std::fabs(got / best - 1.0);
  return {rel <= 0.005 && rel_scan <= 0.005, "beta_V(1) = " + fmt("%.6f", got) + ", scan " + fmt("%.6f", best) +
                                                 ", rel to 64.016 " + fmt("%.2g", rel)};
}

Outcome end_to_end() {
  struct Case {
    std::string name, overrides;
    Theorem t;
  };
  const std::vector<Case> cases = {
      {"ex3_2", "potential.kind = \"zero\"", Theorem::weak},
      {"ex2_4", "potential.kind = \"zero\"\ngrid.r_min = 1e-8\ngrid.r_max = 1\ngrid.r_points = 9", Theorem::super_finite},
  };
  int checks = 0, failed = 0;
  std::string first;
  for (const Case& cs : cases) {
    const Scenario s = open_scenario(cs.name, doc(cs.overrides));
    const Context c = s.context();
    const RateCurve curve = run_rate(s, c, cs.t);
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      for (double n : {4.0, 8.0, 16.0}) {
        const TestFunction f = ramp(n);
        for (LogReal rate : {curve.points[i].value, curve.monotone[i]}) {
          const ResidualReport rep = cs.t == Theorem::weak ? weak_residual(c, f, curve.points[i].r, rate, 1e-9)
                                                           : super_residual(c, f, curve.points[i].r, rate, 1e-9);
          ++checks;
          if (rep.verdict != "pass" && rep.verdict != "vacuous") {
            ++failed;
            if (first.empty())
              first = cs.name + " r=" + fmt("%g", curve.points[i].r) + " n=" + fmt("%g", n) + " residual " +
                      fmt("%.3g", rep.residual);
          }
        }
      }
    }
  }
  return {failed == 0, std::to_string(checks) + " residuals, " + std::to_string(failed) + " negative" +
                           (first.empty() ? "" : "; " + first)};
}

std::string run_cli(const std::string& args, int threads, const std::string& out) {
  const std::string cmd = "PERTLAB_THREADS=" + std::to_string(threads) + " \"" + PERTLAB_CLI + "\" " + args +
                          " --out \"" + out + "\" 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) return "exit " + std::to_string(rc);
  return read_text(out);
}

Outcome determinism() {
  const std::vector<std::string> runs = {
      "scenario run --scenario ex2_3 --seed 7 --r-grid 1e-3:1e-1:5",
      "scenario run --scenario ex3_2 --seed 7 --r-grid 1e-3:1e-1:5",
      "quantities --scenario ex3_2 --seed 7",
  };
  std::string detail;
  bool ok = true;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::vector<std::string> outs;
    for (int threads : {1, 4, 8}) {
      const std::string path = "determinism_" + std::to_string(k) + "_" + std::to_string(threads) + ".csv";
      outs.push_back(run_cli(runs[k], threads, path));
      std::remove(path.c_str());
    }
    const bool same = outs[0] == outs[1] && outs[0] == outs[2] && outs[0].rfind("exit", 0) != 0 && !outs[0].empty();
    ok &= same;
    detail += std::string(k ? "; " : "") + runs[k].substr(0, runs[k].find(" --")) + (same ? " identical" : " DIFFERS");
  }
  return {ok, detail + " across 1/4/8 threads"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "generalized inverse contract", generalized_inverse},
      {2, "truncation lemma", truncation_lemma},
      {3, "lambda closed form", lambda_closed_form},
      {4, "super-infinite exponent (ex2_3)", super_infinite_exponent},
      {5, "super-finite exponent (ex2_4)", super_finite_exponent},
      {6, "spectral gap disproof sweep (prop2_5)", disproof},
      {7, "weak exponent (ex3_2)", weak_exponent},
      {8, "lemma split checks", lemma_split},
      {9, "variation reduction", variation_reduction},
      {10, "toy dyadic super-finite point", toy_point},
      {11, "end-to-end V=0 consistency", end_to_end},
      {12, "determinism across thread counts", determinism},
  };
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : all) {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
