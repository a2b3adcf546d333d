#include <doctest.h>

#include <cmath>
#include <vector>

#include "pertlab/errors.hpp"
#include "pertlab/families.hpp"
#include "pertlab/lab.hpp"
#include "pertlab/rate.hpp"
#include "pertlab/scenario.hpp"
#include "pertlab/synth.hpp"

using namespace pertlab;

TEST_CASE("rate functions and their inverses") {
  for (const auto& b : {RateFunction::constant(3.0), RateFunction::power(2.0, 0.5), RateFunction::exp_power(1.0, 1.0),
                        RateFunction::exp_log_power(1.0, 2.0)}) {
    for (double s : {1e-6, 0.1, 1.0, 10.0}) {
      const LogReal v = b(LogReal::from_value(s));
      const LogReal back = b.inverse(v);
      if (b.form() == RateForm::constant) {
        // Every s' > 0 attains the constant, so the infimum is 0.
        CHECK(back.is_zero());
      } else {
        CHECK(back.log() == doctest::Approx(std::log(s)).epsilon(1e-9));
      }
    }
  }
  CHECK(RateFunction::exp_power(1.0, 1.0).log_at(0.5) == doctest::Approx(3.0));
  CHECK(RateFunction::constant(3.0).inverse(LogReal::from_value(2.0)).is_infinite());
  CHECK(RateFunction::power(1.0, 1.0).inverse(LogReal::from_value(4.0)).value() == doctest::Approx(0.25));
}

TEST_CASE("rate functions must be nonincreasing") {
  CHECK_THROWS_AS(RateFunction::power(1.0, -1.0), ConfigError);
  CHECK_THROWS_AS(RateFunction::table({1.0, 2.0}, {1.0, 2.0}, true), ConfigError);
}

TEST_CASE("toy growth quantities") {
  const Scenario s = open_scenario("toy_dyadic");
  const Context c = s.context();
  CHECK(c.lambda == doctest::Approx(1.0));
  const SupValue e = eps_nk(c, Extent::of(4), Extent::of(1));
  CHECK(e.value.value() == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(c_delta(4.0) == doctest::Approx(1.0 / 16.0));
  CHECK(c_delta(2.0) == doctest::Approx(std::pow((std::sqrt(2.0) - 1.0) / 2.0, 2)));
}

TEST_CASE("toy finite synthesis") {
  const Scenario s = open_scenario("toy_dyadic");
  const Context c = s.context();
  const FiniteTable t = finite_table(c, 20);
  const RatePoint p = beta_V_super_finite(c, t, 1.0);
  CHECK(p.value.value() == doctest::Approx(64.0625).epsilon(1e-3));
  CHECK(std::isfinite(p.witness.rprime));
  // A larger r gives a rate no worse.
  CHECK(beta_V_super_finite(c, t, 2.0).value <= p.value);
}

TEST_CASE("variation rate has the cubic closed form") {
  Scenario s = open_scenario("lipschitz_var");
  Context c = s.context();
  c.V = Potential::zero();
  c.beta = RateFunction::power(1.0, 1.0);
  const double k1 = 1.0, k2 = 0.0;
  const double sv = 1e-6;
  const RatePoint p = beta_V_variation(c, k1, k2, sv);
  // inf over s' <= s of 16 beta(r)^3 (4 + lambda s'), r = s' e^{-1} / (4 + lambda s'):
  // attained at s' = s with value 16 (4 + lambda s)^4 e^3 / s^3.
  const double expected = 16.0 * std::pow(4.0 + c.lambda * sv, 4) * std::exp(3.0) / (sv * sv * sv);
  CHECK(p.value.value() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("monotone envelope is a running minimum") {
  std::vector<RatePoint> pts(4);
  const double vals[] = {10.0, 12.0, 5.0, 7.0};
  for (int i = 0; i < 4; ++i) {
    pts[i].r = i + 1.0;
    pts[i].value = LogReal::from_value(vals[i]);
  }
  const auto m = monotone_envelope(pts);
  REQUIRE(m.size() == 4);
  CHECK(m[0].value() == doctest::Approx(10.0));
  CHECK(m[1].value() == doctest::Approx(10.0));
  CHECK(m[2].value() == doctest::Approx(5.0));
  CHECK(m[3].value() == doctest::Approx(5.0));
}

TEST_CASE("families and truncation") {
  const auto f = ramp(4.0);
  CHECK(f(0.0) == 0.0);
  CHECK(f(8.0) == doctest::Approx(f(100.0)));
  CHECK(f.max_value() > 0.0);
  // f_{delta,i} = (f ^ delta^{(i+1)/2} - delta^{i/2})^+
  CHECK(truncate(3.0, 4.0, 0) == doctest::Approx(1.0));
  CHECK(truncate(3.0, 4.0, 1) == doctest::Approx(1.0));
  CHECK(truncate(3.0, 4.0, 2) == 0.0);
  CHECK(truncation_slack(3.0, 4.0, 0) >= 0.0);
  CHECK(family_kind("sawtooth-exp") == FamilyKind::sawtooth_exp);
  CHECK(family_name(FamilyKind::cutoff_g) == "cutoff-g");
  CHECK_THROWS_AS(family_kind("triangle"), ConfigError);
}

TEST_CASE("judge verdicts") {
  ResidualReport r;
  r.residual = -1e-12;
  r.tolerance = 1e-9;
  judge(r);
  CHECK(r.verdict == "pass");
  r.residual = -1e-3;
  judge(r);
  CHECK(r.verdict == "fail");
  r.error_bar = 1e-2;
  judge(r);
  CHECK(r.verdict != "fail");
}

TEST_CASE("zero variance has no Rayleigh quotient") {
  const Scenario s = open_scenario("ex2_3");
  const Context c = s.context();
  CHECK_THROWS_AS(log_rayleigh(c, TestFunction::constant(2.0)), UndefinedRatioError);
}

TEST_CASE("super inequality holds along the ex2_3 curve") {
  const Scenario s = open_scenario("ex2_3");
  const Context c = s.context();
  const RateCurve curve = run_rate(s, c, s.theorem);
  for (std::size_t i = 0; i < curve.points.size(); i += 4) {
    const auto& p = curve.points[i];
    for (double n : {4.0, 16.0}) {
      ResidualReport rep = super_residual(c, ramp(n), p.r, p.value);
      CHECK(rep.verdict != "fail");
    }
  }
}

TEST_CASE("weak rate without a potential is constant") {
  Scenario s = open_scenario("ex3_2");
  Context c = s.context();
  c.V = Potential::zero();
  WeakSearch w(c, s.weak);
  const RatePoint p = w(1e-2);
  CHECK(p.value.value() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("serial and parallel synthesis agree") {
  const Scenario s = open_scenario("ex2_4");
  const Context c = s.context();
  const auto ts = finite_table(c, 24, Exec::serial);
  const auto tp = finite_table(c, 24, Exec::parallel);
  CHECK(ts.K == tp.K);
  CHECK(ts.J == tp.J);
  for (std::size_t i = 0; i < ts.eps.size(); ++i) CHECK(ts.eps[i].value.log() == tp.eps[i].value.log());

  const auto gs = growth_table(c, {1, 4, 16}, {1, 2}, Variant::super, Exec::serial);
  const auto gp = growth_table(c, {1, 4, 16}, {1, 2}, Variant::super, Exec::parallel);
  REQUIRE(gs.size() == gp.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    CHECK(gs[i].K == gp[i].K);
    CHECK(gs[i].gamma.value == gp[i].gamma.value);
    CHECK(gs[i].eta.value == gp[i].eta.value);
  }

  const RateCurve a = run_rate(s, c, s.theorem, Exec::serial);
  const RateCurve b = run_rate(s, c, s.theorem, Exec::parallel);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].value.log() == b.points[i].value.log());
}

TEST_CASE("sawtooth-exp rises across the inner tooth only") {
  const auto f = sawtooth_exp(5.0, 2.0, 20.0, 3.0);
  CHECK(f(16.0) == 0.0);
  CHECK(f(19.0) == 1.0);
  CHECK(f(20.0) == 1.0);
  double prev = 0.0;
  for (double x = 16.25; x < 19.0; x += 0.25) {
    const double v = f(x);
    CHECK(v > prev);
    CHECK(v < 1.0);
    prev = v;
  }
  CHECK_THROWS_AS(sawtooth_exp(5.0, 2.0, 10.0, 3.0), ConfigError);
}
