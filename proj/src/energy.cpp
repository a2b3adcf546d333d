#include "pertlab/energy.hpp"

#include <algorithm>
#include <cmath>

#include "pertlab/errors.hpp"

namespace pertlab {

namespace {

void require_line(const JumpKernel& kernel) {
  if (kernel.kind() == KernelKind::abstract) throw HypothesisError("abstract kernel has no density to integrate");
  if (kernel.translation() && kernel.dim() != 1)
    throw HypothesisError("energies are implemented in dimension 1");
}

// Splits |z| on one side of x into consecutive intervals [w_i, w_{i+1}];
// the last interval is unbounded unless the kernel has a finite range.
std::vector<double> side_points(const JumpKernel& kernel, const TestFunction& f, double x, double sign,
                                double split) {
  const auto range = kernel.finite_range();
  std::vector<double> w{0.0};
  auto add = [&](double v) {
    if (v > 0.0 && (!range || v < *range)) w.push_back(v);
  };
  add(split);
  for (double b : f.breaks()) add(sign * (b - x));
  if (range) w.push_back(*range);
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  if (!range) w.push_back(kInf);
  return w;
}

// Closed-form or quadrature mass of the kernel over |z| in [a, b] on one side.
double log_side_mass(const JumpKernel& kernel, double x, double sign, double a, double b, double tol) {
  if (kernel.translation()) return std::log(kernel.jump_mass_1d(a, b));
  auto lq = [&](double w) { return kernel.log_q_density(x, x + sign * w); };
  LogQuadOptions opt;
  opt.rel_tol = tol;
  if (std::isfinite(b)) return log_integrate(lq, {a, b}, opt).log_value;
  return log_integrate_to_infinity(lq, a, {}, std::max(1.0, a), opt).log_value;
}

double log_kernel(const JumpKernel& kernel, double x, double y) {
  return kernel.translation() ? kernel.log_j(std::fabs(x - y)) : kernel.log_q_density(x, y);
}

double probe_point(double x, double sign, double a, double b) {
  return x + sign * (std::isfinite(b) ? 0.5 * (a + b) : a + 1.0);
}

std::vector<double> outer_breaks(const JumpKernel& kernel, const Potential& V, const TestFunction& f,
                                 double split) {
  std::vector<double> br{0.0};
  const auto range = kernel.finite_range();
  for (double b : f.breaks()) {
    br.push_back(b);
    br.push_back(b - split);
    br.push_back(b + split);
    if (range) {
      br.push_back(b - *range);
      br.push_back(b + *range);
    }
  }
  for (double b : V.breakpoints(V.break_horizon())) br.push_back(b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

std::vector<double> line_breaks(const Potential& V, const TestFunction& f) {
  std::vector<double> br = f.breaks();
  for (double b : V.breakpoints(V.break_horizon())) br.push_back(b);
  return br;
}

double signed_of(const TestFunction& f, double x) {
  const double v = f(x);
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  return std::isfinite(f.log_abs(x)) ? 1.0 : 0.0;
}

}  // namespace

double log_carre_du_champ(const JumpKernel& kernel, const TestFunction& f, double x, const QuadratureSettings& qs) {
  require_line(kernel);
  LogQuadOptions opt;
  opt.rel_tol = qs.inner_tol;
  double total = -kInf;
  const double p = 2.0 / (2.0 - std::min(kernel.alpha(), 1.95));
  for (double sign : {1.0, -1.0}) {
    const auto w = side_points(kernel, f, x, sign, qs.split_radius);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const double a = w[i], b = w[i + 1];
      const double y = probe_point(x, sign, a, b);
      double part;
      if (f.piece_constant(f.piece_of(y))) {
        const double ld = f.log_abs_diff(x, y);
        if (ld == -kInf) continue;
        part = 2.0 * ld + log_side_mass(kernel, x, sign, a, b, qs.inner_tol);
      } else {
        auto L = [&](double v) {
          const double yy = x + sign * v;
          const double ld = f.log_abs_diff(x, yy);
          if (ld == -kInf) return -kInf;
          return 2.0 * ld + log_kernel(kernel, x, yy);
        };
        if (a == 0.0) {
          // z = t^p removes the diagonal singularity.
          auto Lt = [&](double t) { return L(std::pow(t, p)) + std::log(p) + (p - 1.0) * std::log(t); };
          part = log_integrate(Lt, {0.0, std::pow(b, 1.0 / p)}, opt).log_value;
        } else if (std::isfinite(b)) {
          part = log_integrate(L, {a, b}, opt).log_value;
        } else {
          part = log_integrate_to_infinity(L, a, {}, std::max(1.0, a), opt).log_value;
        }
      }
      total = log_add_exp(total, part);
    }
  }
  return total;
}

double carre_du_champ(const JumpKernel& kernel, const TestFunction& f, const TestFunction& g, double x,
                      const QuadratureSettings& qs) {
  require_line(kernel);
  const double p = 2.0 / (2.0 - std::min(kernel.alpha(), 1.95));
  const double fx = f(x), gx = g(x);
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    auto w = side_points(kernel, f, x, sign, qs.split_radius);
    for (double b : g.breaks()) {
      const double v = sign * (b - x);
      if (v > 0.0 && (!kernel.finite_range() || v < *kernel.finite_range())) w.push_back(v);
    }
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const double a = w[i], b = w[i + 1];
      const double y = probe_point(x, sign, a, b);
      if (f.piece_constant(f.piece_of(y)) && g.piece_constant(g.piece_of(y))) {
        const double prod = (fx - f(y)) * (gx - g(y));
        if (prod != 0.0)
          total += prod * std::exp(log_side_mass(kernel, x, sign, a, b, qs.inner_tol));
        continue;
      }
      auto h = [&](double v) {
        const double yy = x + sign * v;
        const double prod = (fx - f(yy)) * (gx - g(yy));
        return prod == 0.0 ? 0.0 : prod * std::exp(log_kernel(kernel, x, yy));
      };
      if (a == 0.0) {
        auto ht = [&](double t) { return h(std::pow(t, p)) * p * std::pow(t, p - 1.0); };
        total += integrate(ht, {0.0, std::pow(b, 1.0 / p)}, qs.inner_tol);
      } else if (std::isfinite(b)) {
        total += integrate(h, {a, b}, qs.inner_tol);
      } else {
        auto ht = [&](double t) { return h(a / t) * a / (t * t); };
        total += integrate(ht, {0.0, 1.0}, qs.inner_tol);
      }
    }
  }
  return total;
}

LogQuadResult log_energy_V(const RadialModel& model, const JumpKernel& kernel, const Potential& V,
                           const TestFunction& f, const QuadratureSettings& qs) {
  require_line(kernel);
  if (model.dim() != 1) throw HypothesisError("energies are implemented in dimension 1");
  if (f.is_constant()) return LogQuadResult{};
  LogQuadOptions opt;
  opt.rel_tol = qs.outer_tol;
  opt.exec = qs.exec;
  QuadratureSettings inner = qs;
  inner.exec = Exec::serial;
  auto integrand = [&](double x) {
    const double g = log_carre_du_champ(kernel, f, x, inner);
    return g == -kInf ? -kInf : g + V(x);
  };
  return model.log_integrate_line(integrand, outer_breaks(kernel, V, f, qs.split_radius), opt);
}

LogQuadResult log_energy(const RadialModel& model, const JumpKernel& kernel, const TestFunction& f,
                         const QuadratureSettings& qs) {
  return log_energy_V(model, kernel, Potential::zero(), f, qs);
}

double energy_bilinear(const RadialModel& model, const JumpKernel& kernel, const Potential& V,
                       const TestFunction& f, const TestFunction& g, const QuadratureSettings& qs) {
  const double plus = std::exp(log_energy_V(model, kernel, V, combine(f, 1.0, g, 1.0), qs).log_value);
  const double minus = std::exp(log_energy_V(model, kernel, V, combine(f, 1.0, g, -1.0), qs).log_value);
  return 0.25 * (plus - minus);
}

LogQuadResult log_muV_moment(const RadialModel& model, const Potential& V, const TestFunction& f, double p,
                             const QuadratureSettings& qs, std::optional<std::pair<double, double>> window) {
  if (model.dim() != 1) throw HypothesisError("moments are implemented in dimension 1");
  LogQuadOptions opt;
  opt.rel_tol = qs.outer_tol;
  opt.exec = qs.exec;
  auto br = line_breaks(V, f);
  if (window) {
    for (double r : {window->first, window->second})
      if (std::isfinite(r) && r > 0.0) {
        br.push_back(r);
        br.push_back(-r);
      }
  }
  auto integrand = [&](double x) {
    if (window && (std::fabs(x) < window->first || std::fabs(x) > window->second)) return -kInf;
    const double la = f.log_abs(x);
    return la == -kInf ? -kInf : p * la + V(x);
  };
  return model.log_integrate_line(integrand, br, opt);
}

SignedLog muV_mean(const RadialModel& model, const Potential& V, const TestFunction& f,
                   const QuadratureSettings& qs) {
  LogQuadOptions opt;
  opt.rel_tol = qs.outer_tol;
  opt.exec = qs.exec;
  const auto br = line_breaks(V, f);
  auto part = [&](double s) {
    auto integrand = [&](double x) {
      if (signed_of(f, x) != s) return -kInf;
      return f.log_abs(x) + V(x);
    };
    return model.log_integrate_line(integrand, br, opt).log_value;
  };
  const double pos = part(1.0);
  const double neg = part(-1.0);
  if (pos == neg) return SignedLog{0.0, -kInf};
  if (pos > neg) return SignedLog{1.0, log_sub_exp(pos, neg)};
  return SignedLog{-1.0, log_sub_exp(neg, pos)};
}

LogQuadResult log_var_muV(const RadialModel& model, const Potential& V, const TestFunction& f,
                          const QuadratureSettings& qs) {
  const SignedLog m = muV_mean(model, V, f, qs);
  LogQuadOptions opt;
  opt.rel_tol = qs.outer_tol;
  opt.exec = qs.exec;
  auto integrand = [&](double x) {
    const double s = signed_of(f, x);
    const double la = f.log_abs(x);
    double d;
    if (s == 0.0) {
      d = m.log_abs;
    } else if (m.sign == 0.0) {
      d = la;
    } else if (s == m.sign) {
      if (la == m.log_abs) return -kInf;
      d = la > m.log_abs ? log_sub_exp(la, m.log_abs) : log_sub_exp(m.log_abs, la);
    } else {
      d = log_add_exp(la, m.log_abs);
    }
    return d == -kInf ? -kInf : 2.0 * d + V(x);
  };
  return model.log_integrate_line(integrand, line_breaks(V, f), opt);
}

TestFunction combine(const TestFunction& f, double a, const TestFunction& g, double b) {
  std::vector<double> br = f.breaks();
  br.insert(br.end(), g.breaks().begin(), g.breaks().end());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  if (!f.knots_x().empty() && !g.knots_x().empty()) {
    std::vector<double> ys;
    for (double x : br) ys.push_back(a * f(x) + b * g(x));
    return TestFunction::piecewise_linear(br, ys, "combination");
  }
  std::vector<char> flags(br.size() + 1, 0);
  for (std::size_t i = 0; i <= br.size(); ++i) {
    double y;
    if (br.empty()) y = 0.0;
    else if (i == 0) y = br.front() - 1.0;
    else if (i == br.size()) y = br.back() + 1.0;
    else y = 0.5 * (br[i - 1] + br[i]);
    flags[i] = f.piece_constant(f.piece_of(y)) && g.piece_constant(g.piece_of(y));
  }
  auto F = [f, g, a, b](double x) { return a * f(x) + b * g(x); };
  return TestFunction::custom(F, nullptr, nullptr, br, flags, "combination");
}

}  // namespace pertlab
