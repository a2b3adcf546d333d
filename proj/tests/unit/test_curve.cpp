#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "pertlab/curve.hpp"
#include "pertlab/errors.hpp"

using namespace pertlab;

namespace {

RateCurve sample_curve() {
  RateCurve c;
  c.scenario = "unit";
  c.theorem = "super_infinite";
  c.scenario_hash = 0xfedcba9876543210ULL;
  c.seed = 42;
  c.condition = "A1 supported";
  const double logs[] = {0.1, std::log(3.0), 800.0, -800.0, 1e8, kInf};
  double r = 1e-4;
  for (double lg : logs) {
    RatePoint p;
    p.r = r;
    p.value = LogReal::from_log(lg);
    p.witness.n = 17;
    p.witness.j = 3;
    p.witness.s = 1.0 / 3.0;
    p.witness.log_s = std::log(1.0 / 3.0);
    p.status = "numerical";
    p.stderr_bar = 0.0123;
    c.points.push_back(p);
    r *= 7.3;
  }
  c.points[5].note = "no feasible j";
  c.monotone = monotone_envelope(c.points);
  return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("fit recovers known exponents") {
  std::vector<double> r, lb;
  for (int i = 0; i < 12; ++i) {
    const double x = std::pow(10.0, -3.0 - 0.25 * i);
    r.push_back(x);
    lb.push_back(3.0 / (x * x));
  }
  const FitResult f = fit_exponent(r, lb, FitTransform::loglog_log);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.points == 12);

  std::vector<double> lp;
  for (double x : r) lp.push_back(std::log(5.0 * (1.0 + 1.0 / x)));
  CHECK(fit_exponent(r, lp, FitTransform::log_log).slope == doctest::Approx(1.0).epsilon(1e-3));

  CHECK_THROWS_AS(fit_exponent({1e-3, 1e-2}, {1, 2}, FitTransform::log_log), InsufficientDataError);
  CHECK(fit_transform("loglog-loglog") == FitTransform::loglog_loglog);
  CHECK(fit_transform_name(FitTransform::loglog_log) == "loglog-log");
  CHECK_THROWS_AS(fit_transform("cubic"), ConfigError);
}

TEST_CASE("log value text") {
  CHECK(format_log_value(std::log(2.5)) == "2.5");
  CHECK(format_log_value(kInf) == "inf");
  CHECK(format_log_value(-kInf) == "0");
  const std::string big = format_log_value(1e4);
  CHECK(big.find("e+4342") != std::string::npos);
  CHECK(parse_log_value(big) == doctest::Approx(1e4).epsilon(1e-15));
  CHECK(parse_log_value("1e-3") == doctest::Approx(std::log(1e-3)));
  CHECK(std::isinf(parse_log_value("inf")));
}

TEST_CASE("empty and single point CSV") {
  RateCurve c;
  CHECK(curve_csv(c) == std::string(kCsvHeader) + "\n");
  RateCurve one = sample_curve();
  one.points.resize(1);
  one.monotone.resize(1);
  const std::string csv = curve_csv(one);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.rfind(kCsvHeader, 0) == 0);
}

TEST_CASE("JSON round trip is bit exact") {
  const RateCurve c = sample_curve();
  const RateCurve back = curve_from_json(curve_json(c));
  CHECK(back.scenario == c.scenario);
  CHECK(back.theorem == c.theorem);
  CHECK(back.scenario_hash == c.scenario_hash);
  CHECK(back.seed == c.seed);
  REQUIRE(back.points.size() == c.points.size());
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    CAPTURE(i);
    CHECK(same_bits(back.points[i].r, c.points[i].r));
    CHECK(same_bits(back.points[i].value.log(), c.points[i].value.log()));
    CHECK(same_bits(back.monotone[i].log(), c.monotone[i].log()));
    CHECK(same_bits(back.points[i].witness.s, c.points[i].witness.s));
    CHECK(std::isnan(back.points[i].witness.k));
    CHECK(back.points[i].status == c.points[i].status);
    CHECK(back.points[i].note == c.points[i].note);
  }
  CHECK(curve_json(back) == curve_json(c));
}

TEST_CASE("CSV round trip preserves normal values") {
  const RateCurve c = sample_curve();
  const RateCurve back = curve_from_csv(curve_csv(c));
  REQUIRE(back.points.size() == c.points.size());
  CHECK(back.points[0].value.value() == c.points[0].value.value());
  CHECK(back.points[1].value.value() == c.points[1].value.value());
  CHECK(back.points[2].value.log() == doctest::Approx(800.0).epsilon(1e-15));
  CHECK(back.points[5].value.is_infinite());
}

TEST_CASE("file errors name the path") {
  CHECK_THROWS_WITH_AS(read_text("/nonexistent/x.json"), doctest::Contains("/nonexistent/x.json"), IoError);
}
