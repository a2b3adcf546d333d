#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "pertlab/kernel.hpp"
#include "pertlab/measure.hpp"
#include "pertlab/potential.hpp"
#include "pertlab/quadrature.hpp"
#include "pertlab/test_function.hpp"

namespace pertlab {

struct QuadratureSettings {
  double inner_tol = 1e-9;
  double outer_tol = 1e-8;
  /// Inner integrals are split at |x - y| = split_radius.
  double split_radius = 1.0;
  long max_samples = 1L << 20;
  std::uint64_t seed = 20240607;
  bool log_domain = true;
  Exec exec = Exec::parallel;
};

/// Signed number kept as sign and log magnitude.
struct SignedLog {
  double sign = 0.0;
  double log_abs = -kInf;
  double value() const { return sign * std::exp(log_abs); }
};

/// log Gamma(f,f)(x) in dimension 1.
double log_carre_du_champ(const JumpKernel& kernel, const TestFunction& f, double x,
                          const QuadratureSettings& qs = {});
/// Gamma(f,g)(x), bilinear and symmetric.
double carre_du_champ(const JumpKernel& kernel, const TestFunction& f, const TestFunction& g, double x,
                      const QuadratureSettings& qs = {});

/// log E_V(f) = log int Gamma(f,f) e^V dmu; V = 0 gives the plain energy.
LogQuadResult log_energy_V(const RadialModel& model, const JumpKernel& kernel, const Potential& V,
                           const TestFunction& f, const QuadratureSettings& qs = {});
LogQuadResult log_energy(const RadialModel& model, const JumpKernel& kernel, const TestFunction& f,
                         const QuadratureSettings& qs = {});
/// E_V(f,g) by polarization.
double energy_bilinear(const RadialModel& model, const JumpKernel& kernel, const Potential& V,
                       const TestFunction& f, const TestFunction& g, const QuadratureSettings& qs = {});

/// log mu_V(|f|^p), optionally restricted to lo <= |x| <= hi.
LogQuadResult log_muV_moment(const RadialModel& model, const Potential& V, const TestFunction& f, double p,
                             const QuadratureSettings& qs = {},
                             std::optional<std::pair<double, double>> window = std::nullopt);
/// mu_V(f) with its sign.
SignedLog muV_mean(const RadialModel& model, const Potential& V, const TestFunction& f,
                   const QuadratureSettings& qs = {});
/// log Var_{mu_V}(f) = log mu_V((f - mu_V(f))^2).
LogQuadResult log_var_muV(const RadialModel& model, const Potential& V, const TestFunction& f,
                          const QuadratureSettings& qs = {});

/// a f + b g with merged pieces.
TestFunction combine(const TestFunction& f, double a, const TestFunction& g, double b);

}  // namespace pertlab
