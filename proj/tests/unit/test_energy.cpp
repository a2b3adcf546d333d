#include <doctest.h>

#include <cmath>

#include "pertlab/energy.hpp"
#include "pertlab/errors.hpp"
#include "pertlab/families.hpp"
#include "pertlab/kernel.hpp"
#include "pertlab/measure.hpp"
#include "pertlab/potential.hpp"

using namespace pertlab;

namespace {
struct Stable {
  RadialModel m = RadialModel::normalize(1, RadialProfile::stable(1.0));
  JumpKernel k = JumpKernel::stable_like(1, 1.0, m.log_c());
};
}  // namespace

TEST_CASE("carre du champ of sin at the origin") {
  // j(z) = |z|^{-2} / 2: Gamma(sin)(0) = int sin^2(z) z^{-2} / 2 dz = pi / 2.
  Stable S;
  const auto sn = TestFunction::smooth([](double x) { return std::sin(x); }, 1.0, 1.0, "sin");
  CHECK(std::exp(log_carre_du_champ(S.k, sn, 0.0)) == doctest::Approx(M_PI / 2).epsilon(1e-7));
  CHECK(carre_du_champ(S.k, sn, sn, 0.0) == doctest::Approx(M_PI / 2).epsilon(1e-7));
}

TEST_CASE("energy is quadratic") {
  Stable S;
  const auto f = TestFunction::piecewise_linear({8, 16}, {0, 1});
  const auto e1 = log_energy(S.m, S.k, f);
  const auto e2 = log_energy(S.m, S.k, f.affine(2.0, 0.0));
  CHECK(std::exp(e2.log_value - e1.log_value) == doctest::Approx(4.0).epsilon(1e-7));
  // Adding a constant changes nothing.
  CHECK(log_energy(S.m, S.k, f.affine(1.0, 3.0)).log_value == doctest::Approx(e1.log_value).epsilon(1e-9));
}

TEST_CASE("variance identity under mu_V") {
  Stable S;
  const Potential V = Potential::loglog(0.5).normalized(S.m);
  const auto f = ramp(8.0);
  const double var = std::exp(log_var_muV(S.m, V, f).log_value);
  const double mean = muV_mean(S.m, V, f).value();
  const double m2 = std::exp(log_muV_moment(S.m, V, f, 2.0).log_value);
  CHECK(var == doctest::Approx(m2 - mean * mean).epsilon(1e-8));
  CHECK(var > 0.0);
}

TEST_CASE("constant functions have zero energy") {
  Stable S;
  const auto e = log_energy(S.m, S.k, TestFunction::constant(3.0));
  CHECK(e.log_value == -kInf);
}

TEST_CASE("polarization is symmetric") {
  Stable S;
  const auto f = ramp(4.0), g = cutoff_g(3.0);
  const Potential V = Potential::zero();
  const double fg = energy_bilinear(S.m, S.k, V, f, g);
  const double gf = energy_bilinear(S.m, S.k, V, g, f);
  CHECK(fg == doctest::Approx(gf).epsilon(1e-9));
}
