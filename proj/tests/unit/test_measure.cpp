#include <doctest.h>

#include <cmath>
#include <vector>

#include "pertlab/energy.hpp"
#include "pertlab/errors.hpp"
#include "pertlab/kernel.hpp"
#include "pertlab/measure.hpp"
#include "pertlab/potential.hpp"
#include "pertlab/region.hpp"
#include "pertlab/special.hpp"

using namespace pertlab;

TEST_CASE("normalizing constants") {
  CHECK(RadialModel::normalize(1, RadialProfile::stable(1.0)).c() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(RadialModel::normalize(1, RadialProfile::uniform(1.0)).c() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(RadialModel::normalize(1, RadialProfile::stretched_exp(2.0)).c() ==
        doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("tails") {
  const auto s = RadialModel::normalize(1, RadialProfile::stable(1.0));
  // c = 1/2, density (1 + |x|)^{-2} / 2: mu(rho > t) = 1 / (1 + t).
  CHECK(s.tail(3.0) == doctest::Approx(0.25).epsilon(1e-10));
  const auto g = RadialModel::normalize(1, RadialProfile::stretched_exp(2.0));
  CHECK(g.tail(1.0) == doctest::Approx(std::erfc(1.0)).epsilon(1e-10));
  CHECK(g.log_tail(30.0) == doctest::Approx(log_erfc(30.0)).epsilon(1e-10));
  const auto ls = RadialModel::normalize(1, RadialProfile::log_stable(1.0));
  // Tails far beyond the double range stay finite in the log.
  CHECK(std::isfinite(ls.log_tail_at_log(1e13)));
  CHECK(ls.log_tail_at_log(39.99) > ls.log_tail_at_log(40.01));
}

TEST_CASE("lambda closed form for stable-like kernels") {
  const auto s = RadialModel::normalize(1, RadialProfile::stable(1.0));
  auto k = JumpKernel::stable_like(1, 1.0, s.log_c());
  CHECK(lambda_bound(k, s, {}) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(std::exp(k.log_mass_beyond(4.0)) == doctest::Approx(0.25).epsilon(1e-12));

  const auto g = RadialModel::normalize(1, RadialProfile::stretched_exp(2.0));
  auto kt = JumpKernel::truncated(1, 0.5, g.log_c(), 1.0);
  CHECK(lambda_bound(kt, g, {}) == doctest::Approx(4.0 * g.c() / 3.0).epsilon(1e-8));
  CHECK(kt.finite_range().value() == 1.0);
}

TEST_CASE("kernel parameters are validated") {
  CHECK_THROWS_WITH_AS(JumpKernel::stable_like(1, 2.5, 0.0), "alpha must lie in (0,2)", ConfigError);
  CHECK_THROWS_AS(JumpKernel::truncated(1, 1.0, 0.0, -1.0), ConfigError);
}

TEST_CASE("potential normalization and extrema") {
  const auto s = RadialModel::normalize(1, RadialProfile::stable(1.0));
  const Potential V = Potential::loglog(0.5).normalized(s);
  CHECK(V.log_mu_exp(s) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(V.ball_sup(10.0) == doctest::Approx(V(10.0)));
  CHECK(V.ball_inf(10.0) == doctest::Approx(V(0.0)));
  const Potential c = Potential::cosine(0.5, 1.0, 0.05);
  CHECK(c.variation().value() == doctest::Approx(1.0));
  CHECK(Potential::zero().variation().value() == 0.0);
  CHECK_THROWS_AS(Potential::sawtooth(5.0, 2.0, 10.0), ConfigError);
  CHECK_NOTHROW(Potential::sawtooth(5.0, 2.0, 20.0));
  // e^{V} with V = |x| is not integrable against the Cauchy-type reference.
  CHECK_THROWS_AS(Potential::power(1.0, 1.0).normalized(s), NonNormalizableError);
}

TEST_CASE("region integrals") {
  const auto s = RadialModel::normalize(1, RadialProfile::stable(1.0));
  const auto k = JumpKernel::stable_like(1, 1.0, s.log_c());
  RegionSettings rs;
  const RegionEstimate g = region_gamma(s, k, Extent::of(4), Extent::of(4), rs);
  CHECK(g.value > 0.0);
  CHECK(g.rel_se() <= rs.rel_se_cap);
  // Beyond the sampling limit the integrals become certified bounds.
  const RegionEstimate b = region_gamma(s, k, Extent::of(1e13), Extent::of(1e13), rs);
  CHECK(b.bound);
  const auto kt = JumpKernel::truncated(1, 1.0, s.log_c(), 1.0);
  const RegionEstimate z = region_gamma(s, kt, Extent::of(4), Extent::of(2), rs);
  CHECK(z.exact);
  CHECK(z.value == 0.0);
}
