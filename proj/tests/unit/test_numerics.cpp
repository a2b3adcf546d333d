#include <doctest.h>

#include <cmath>
#include <vector>

#include "pertlab/errors.hpp"
#include "pertlab/extended.hpp"
#include "pertlab/parallel.hpp"
#include "pertlab/quadrature.hpp"
#include "pertlab/rng.hpp"
#include "pertlab/special.hpp"

using namespace pertlab;

TEST_CASE("log-domain arithmetic") {
  CHECK(log_add_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)).epsilon(1e-15));
  CHECK(log_sub_exp(std::log(5.0), std::log(3.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(log_add_exp(-kInf, 1.0) == 1.0);
  const LogReal a = LogReal::from_value(6.0), b = LogReal::from_value(3.0);
  CHECK((a * b).value() == doctest::Approx(18.0));
  CHECK((a / b).value() == doctest::Approx(2.0));
  CHECK((a + b).value() == doctest::Approx(9.0));
  CHECK(LogReal::from_log(1e6) > LogReal::from_log(9e5));
  CHECK(LogReal::infinity().is_infinite());
  CHECK(LogReal::zero().is_zero());
  CHECK(LogReal::from_value(0.0).is_zero());
}

TEST_CASE("extents keep logs beyond the double range") {
  const Extent big = Extent::from_log(5000.0);
  CHECK_FALSE(big.exact());
  const Extent s = add(big, big, 2.0);
  CHECK(s.log == doctest::Approx(5000.0 + std::log(2.0)));
  const Extent small = add(Extent::of(3.0), Extent::of(4.0), 2.0);
  CHECK(small.exact());
  CHECK(small.value == 9.0);
}

TEST_CASE("log erfc matches erfc and stays finite") {
  for (double x : {-3.0, 0.0, 0.5, 2.0, 4.999, 5.001, 10.0})
    CHECK(log_erfc(x) == doctest::Approx(std::log(std::erfc(x))).epsilon(1e-12));
  CHECK(std::isfinite(log_erfc(1e3)));
  CHECK(log_erfc(1e3) == doctest::Approx(-1e6 - std::log(1e3 * std::sqrt(M_PI))).epsilon(1e-9));
}

TEST_CASE("log E1 is continuous across branches") {
  CHECK(log_expint_e1(29.99) == doctest::Approx(log_expint_e1(30.01) + 0.02 + std::log(30.01 / 29.99)).epsilon(1e-4));
  CHECK(std::exp(log_expint_e1(1.0)) == doctest::Approx(0.219383934395520).epsilon(1e-12));
}

TEST_CASE("log integral of exp(u^2)") {
  // int_0^1 e^{u^2} du = 1.4626517459071816
  CHECK(std::exp(log_int_exp_square(0.0, 1.0)) == doctest::Approx(1.4626517459071816).epsilon(1e-12));
  // Dawson regime: far out the integral is e^{q^2}/(2q) to leading order.
  const double q = 40.0;
  CHECK(log_int_exp_square(20.0, q) == doctest::Approx(q * q - std::log(2 * q) + std::log1p(1.0 / (2 * q * q))).epsilon(1e-6));
}

TEST_CASE("log upper gamma") {
  CHECK(std::exp(log_upper_gamma(1.0, 2.0)) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(std::exp(log_upper_gamma(2.0, 1.0)) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("quadrature") {
  const auto r = log_integrate([](double x) { return -x; }, {0.0, 1.0, 5.0});
  CHECK(std::exp(r.log_value) == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-10));
  const auto t = log_integrate_to_infinity([](double x) { return -2.0 * std::log1p(x); }, 0.0, {}, 1.0);
  CHECK(std::exp(t.log_value) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(integrate([](double x) { return std::sin(x); }, {0.0, M_PI}) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(log_integrate_to_infinity([](double x) { return -0.5 * std::log1p(x); }, 0.0, {}, 1.0),
                  DivergenceError);
}

TEST_CASE("counter rng depends only on its coordinates") {
  const CounterRng a(5, 7), b(5, 7), c(6, 7);
  CHECK(a.uniform(123, 4) == b.uniform(123, 4));
  CHECK(a.uniform(123, 4) != c.uniform(123, 4));
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = a.uniform(i);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
  CHECK(fnv1a("gamma") != fnv1a("eta"));
}

TEST_CASE("serial and parallel maps agree") {
  auto f = [](std::size_t i) { return std::sin(static_cast<double>(i)) * std::exp(-1e-3 * i); };
  const auto s = map_indexed<double>(Exec::serial, 5000, f);
  const auto p = map_indexed<double>(Exec::parallel, 5000, f);
  CHECK(s == p);
}

TEST_CASE("parallel map rethrows the lowest failing index") {
  auto f = [](std::size_t i) -> int {
    if (i == 17 || i == 400) throw ConfigError("at " + std::to_string(i));
    return 0;
  };
  try {
    map_indexed<int>(Exec::parallel, 1000, f);
    FAIL("no exception");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "at 17");
  }
}
