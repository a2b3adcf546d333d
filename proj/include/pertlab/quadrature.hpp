#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pertlab/parallel.hpp"

namespace pertlab {

/// Evaluates log f at a batch of abscissae. Batches let the caller spread
/// expensive integrands over threads without changing the result.
using LogBatch = std::function<void(std::span<const double> x, std::span<double> log_f)>;

struct LogQuadOptions {
  double rel_tol = 1e-10;
  int max_panels = 4000;
  /// Only used when wrapping a scalar integrand.
  Exec exec = Exec::serial;
  /// Largest admissible log of the running total before divergence is declared.
  double log_overflow_guard = 1e300;
};

struct LogQuadResult {
  double log_value = -1.0 / 0.0;
  double log_error = -1.0 / 0.0;
  long evaluations = 0;
  bool converged = true;
  /// error / value, 0 when both vanish.
  double rel_error() const;
};

LogBatch make_batch(std::function<double(double)> log_f, Exec exec);

/// log of the integral of exp(log_f) over [points.front(), points.back()],
/// split at every interior point. Adaptive Gauss-Kronrod 7-15 in the log domain.
LogQuadResult log_integrate(const LogBatch& log_f, std::vector<double> points, const LogQuadOptions& opt = {});
LogQuadResult log_integrate(const std::function<double(double)>& log_f, std::vector<double> points,
                            const LogQuadOptions& opt = {});

/// Same over [a, inf). Panels double in width; a geometric tail is added once
/// the panel contributions decay at a stable ratio. Throws DivergenceError
/// when they do not decay.
LogQuadResult log_integrate_to_infinity(const LogBatch& log_f, double a, std::vector<double> breaks,
                                        double first_width, const LogQuadOptions& opt = {});
LogQuadResult log_integrate_to_infinity(const std::function<double(double)>& log_f, double a,
                                        std::vector<double> breaks, double first_width,
                                        const LogQuadOptions& opt = {});

/// Ordinary adaptive quadrature for sign-changing integrands over a finite
/// range split at the given points.
double integrate(const std::function<double(double)>& f, std::vector<double> points, double rel_tol = 1e-10,
                 double* abs_error = nullptr);

}  // namespace pertlab
