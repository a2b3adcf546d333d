#include "pertlab/region.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pertlab/errors.hpp"
#include "pertlab/quadrature.hpp"
#include "pertlab/rng.hpp"

namespace pertlab {

namespace {

// Mixture of two Lomax laws on [A, inf) with a shared shape; the first
// component sees the bulk of mu, the second the scale of the region.
struct Proposal {
  double A, shape, s1, s2;
  double sample(int comp, double u) const {
    const double s = comp ? s2 : s1;
    return A + s * std::expm1(-std::log1p(-u) / shape);
  }
  double log_density(double r) const {
    auto ld = [&](double s) { return std::log(shape / s) - (shape + 1.0) * std::log1p((r - A) / s); };
    return log_add_exp(ld(s1), ld(s2)) - std::log(2.0);
  }
};

double log_radial_density(const RadialModel& model, double r) {
  double v = model.log_omega() + model.log_density(r);
  if (model.dim() > 1) v += (model.dim() - 1) * std::log(r);
  return v;
}

RegionEstimate exact_value(double v) {
  RegionEstimate e;
  e.value = v;
  e.log_value = std::log(v);
  e.exact = true;
  return e;
}

RegionEstimate bound_from_log(double lg) {
  RegionEstimate e;
  e.log_value = lg;
  e.value = std::exp(lg);
  e.bound = true;
  return e;
}

// Mass of the kernel over the z-shell lo < |z| <= hi in R^m.
double shell_mass(const JumpKernel& kernel, double lo, double hi) {
  const double a = std::exp(kernel.log_mass_beyond(lo));
  if (!std::isfinite(hi)) return a;
  return std::max(0.0, a - std::exp(kernel.log_mass_beyond(hi)));
}

// One-sided custom mass int_{w1}^{w2} q(x, x + sign w) density(x + sign w) dw.
double custom_mass(const JumpKernel& kernel, double x, double sign, double w1, double w2) {
  if (!(w2 > w1)) return 0.0;
  if (auto r = kernel.finite_range()) {
    w2 = std::min(w2, *r);
    if (!(w2 > w1)) return 0.0;
  }
  auto f = [&](double w) { return kernel.log_q_density(x, x + sign * w); };
  LogQuadOptions opt;
  opt.rel_tol = 1e-8;
  if (std::isfinite(w2)) return std::exp(log_integrate(f, {w1, w2}, opt).log_value);
  return std::exp(log_integrate_to_infinity(f, w1, {}, std::max(1.0, w1), opt).log_value);
}

// Draws m standard normal coordinates from counter lanes.
void unit_direction(const CounterRng& rng, std::uint64_t i, int m, std::vector<double>& dir) {
  dir.assign(m, 0.0);
  double norm = 0.0;
  for (int d = 0; d < m; d += 2) {
    const double u1 = rng.uniform(i, 8 + d), u2 = rng.uniform(i, 9 + d);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    dir[d] = rad * std::cos(2.0 * M_PI * u2);
    if (d + 1 < m) dir[d + 1] = rad * std::sin(2.0 * M_PI * u2);
  }
  for (double v : dir) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : dir) v /= norm;
}

// Radius of |z| drawn from the kernel's radial law restricted to (lo, hi].
double shell_radius(double alpha, double lo, double hi, double v) {
  const double a = std::pow(lo, -alpha);
  const double b = std::isfinite(hi) ? std::pow(hi, -alpha) : 0.0;
  return std::pow(a - v * (a - b), -1.0 / alpha);
}

// int_{|x| > A} g(x) mu(dx) by stratified importance sampling. g receives
// the signed point and the sample index.
template <class G>
RegionEstimate sample_region(const RadialModel& model, const JumpKernel& kernel, double A, double scale,
                             std::uint64_t stream, const RegionSettings& s, G&& g) {
  const double shape = std::clamp(model.profile().tail_index / 2.0, 0.25, 2.0);
  const Proposal prop{A, shape, 1.0, std::max(1.0, scale)};
  const CounterRng rng(s.seed, stream);
  long N = std::max(4L, (s.min_samples + 3) / 4 * 4);
  for (;;) {
    const long half = N / 2;
    auto h = map_indexed<double>(s.exec, static_cast<std::size_t>(N), [&](std::size_t idx) {
      const long i = static_cast<long>(idx);
      const int comp = i >= half ? 1 : 0;
      const long st = i - comp * half;
      const double u = (st + rng.uniform(i, static_cast<std::uint64_t>(N))) / half;
      const double r = prop.sample(comp, std::min(u, 1.0 - 0x1p-53));
      if (!std::isfinite(r)) return 0.0;
      const double sign = kernel.translation() ? 1.0 : (rng.bits(i, 1) & 1 ? 1.0 : -1.0);
      const double val = g(sign * r, static_cast<std::uint64_t>(i));
      if (val == 0.0) return 0.0;
      return val * std::exp(log_radial_density(model, r) - prop.log_density(r));
    });
    double sum = 0.0, var = 0.0;
    for (long i = 0; i < N; ++i) sum += h[i];
    for (long i = 0; i + 1 < N; i += 2) var += (h[i] - h[i + 1]) * (h[i] - h[i + 1]);
    RegionEstimate e;
    e.value = sum / N;
    e.log_value = std::log(e.value);
    e.stderr_abs = std::sqrt(var) / N;
    e.samples = N;
    if (e.value == 0.0 || e.stderr_abs <= s.rel_se_cap * e.value) return e;
    if (2 * N > s.max_samples)
      throw PrecisionError("region integral: relative standard error " + std::to_string(e.rel_se()) +
                               " above cap after " + std::to_string(N) + " samples",
                           e.value, e.rel_se());
    N *= 2;
  }
}

std::uint64_t stream_id(const char* tag, double a, double b) {
  std::uint64_t h = fnv1a(tag);
  h = splitmix64(h ^ static_cast<std::uint64_t>(std::llround(a * 4096.0)));
  return splitmix64(h ^ static_cast<std::uint64_t>(std::llround(b * 4096.0)));
}

// int mu(dx) int_{|x-y| > k, |y| >= B} q(x,y) mu(dy)
RegionEstimate gamma_like(const RadialModel& model, const JumpKernel& kernel, double B, double k, const char* tag,
                          const RegionSettings& s) {
  const int m = model.dim();
  const auto range = kernel.finite_range();
  const double hi = range ? *range : kInf;
  if (kernel.translation() && m == 1) {
    auto J = [&](double a, double b) { return kernel.jump_mass_1d(a, b); };
    return sample_region(model, kernel, 0.0, B, stream_id(tag, B, k), s, [&](double x, std::uint64_t) {
      const double v = J(std::max(k, B - x), kInf) + (x - B > k ? J(k, x - B) : 0.0) + J(std::max(k, x + B), kInf);
      return v;
    });
  }
  if (kernel.translation()) {
    const double mass = shell_mass(kernel, k, hi);
    const CounterRng zr(s.seed, stream_id(tag, B, k) ^ 0x5a5a);
    return sample_region(model, kernel, 0.0, B, stream_id(tag, B, k), s, [&](double r, std::uint64_t i) {
      std::vector<double> dir;
      unit_direction(zr, i, m, dir);
      const double rho = shell_radius(kernel.alpha(), k, hi, zr.uniform(i, 2));
      double y2 = 0.0;
      for (int d = 0; d < m; ++d) {
        const double y = (d == 0 ? r : 0.0) + rho * dir[d];
        y2 += y * y;
      }
      return std::sqrt(y2) >= B ? mass : 0.0;
    });
  }
  if (m != 1) throw HypothesisError("custom kernels are only supported in dimension 1");
  return sample_region(model, kernel, 0.0, B, stream_id(tag, B, k), s, [&](double x, std::uint64_t) {
    // z > 0 side then z < 0 side, each restricted to |x + z| >= B.
    double v = 0.0;
    v += custom_mass(kernel, x, 1.0, std::max(k, B - x), kInf);
    if (-B - x > k) v += custom_mass(kernel, x, 1.0, k, -B - x);
    if (x - B > k) v += custom_mass(kernel, x, -1.0, k, x - B);
    v += custom_mass(kernel, x, -1.0, std::max(k, x + B), kInf);
    return v;
  });
}

// int_{|x| > A} mu(dx) int_{|y| <= B} q(x,y) mu(dy), A > B
RegionEstimate eta_like(const RadialModel& model, const JumpKernel& kernel, double A, double B, const char* tag,
                        const RegionSettings& s) {
  const int m = model.dim();
  if (kernel.translation() && m == 1) {
    return sample_region(model, kernel, A, A, stream_id(tag, A, B), s,
                         [&](double x, std::uint64_t) { return kernel.jump_mass_1d(x - B, x + B); });
  }
  if (kernel.translation()) {
    const auto range = kernel.finite_range();
    const CounterRng zr(s.seed, stream_id(tag, A, B) ^ 0x5a5a);
    return sample_region(model, kernel, A, A, stream_id(tag, A, B), s, [&](double r, std::uint64_t i) {
      const double lo = r - B;
      double hi = r + B;
      if (range) hi = std::min(hi, *range);
      if (!(hi > lo)) return 0.0;
      const double mass = shell_mass(kernel, lo, hi);
      std::vector<double> dir;
      unit_direction(zr, i, m, dir);
      const double rho = shell_radius(kernel.alpha(), lo, hi, zr.uniform(i, 2));
      double y2 = 0.0;
      for (int d = 0; d < m; ++d) {
        const double y = (d == 0 ? r : 0.0) + rho * dir[d];
        y2 += y * y;
      }
      return std::sqrt(y2) <= B ? mass : 0.0;
    });
  }
  if (m != 1) throw HypothesisError("custom kernels are only supported in dimension 1");
  return sample_region(model, kernel, A, A, stream_id(tag, A, B), s, [&](double x, std::uint64_t) {
    const double sign = x > 0.0 ? -1.0 : 1.0;
    const double ax = std::fabs(x);
    return custom_mass(kernel, x, sign, ax - B, ax + B);
  });
}

void require_density(const JumpKernel& kernel) {
  if (kernel.kind() == KernelKind::abstract)
    throw HypothesisError("abstract kernel: region integrals are only known where the range rules them out");
}

bool sampled(const Extent& n, const RegionSettings& s) { return n.exact() && n.value <= s.sampling_limit; }

double log_w(const JumpKernel& kernel, const Extent& k) { return kernel.log_mass_beyond_at_log(k.log); }

}  // namespace

RegionEstimate region_gamma(const RadialModel& model, const JumpKernel& kernel, const Extent& n, const Extent& k,
                            const RegionSettings& s) {
  if (auto r = kernel.finite_range(); r && k.log >= std::log(*r)) return exact_value(0.0);
  require_density(kernel);
  if (sampled(n, s)) return gamma_like(model, kernel, n.value - 1.0, k.value, "gamma", s);
  if (!kernel.translation()) throw HypothesisError("radii beyond the sampling limit need a translation kernel");
  // |x| < (n-1)/2 forces |x-y| > (n-1)/2 when |y| >= n-1.
  const Extent h = n.plus(-1.0).times(0.5);
  const double near = model.log_tail(h) + log_w(kernel, k);
  const double far = log_w(kernel, h.log > k.log ? h : k);
  return bound_from_log(log_add_exp(near, far));
}

RegionEstimate region_eta(const RadialModel& model, const JumpKernel& kernel, const Extent& n, const Extent& k,
                          const RegionSettings& s) {
  if (auto r = kernel.finite_range(); r && k.plus(1.0).log >= std::log(*r)) return exact_value(0.0);
  require_density(kernel);
  if (sampled(n, s)) return eta_like(model, kernel, n.value + k.value + 2.0, n.value + 1.0, "eta", s);
  if (!kernel.translation()) throw HypothesisError("radii beyond the sampling limit need a translation kernel");
  // |x - y| > k + 1 on the region.
  return bound_from_log(model.log_tail(add(n, k, 2.0)) + log_w(kernel, k.plus(1.0)));
}

RegionEstimate region_tilde_gamma(const RadialModel& model, const JumpKernel& kernel, const Extent& k,
                                  const RegionSettings& s) {
  if (auto r = kernel.finite_range(); r && k.log >= std::log(*r)) return exact_value(0.0);
  require_density(kernel);
  if (kernel.translation()) {
    RegionEstimate e;
    e.log_value = log_w(kernel, k);
    e.value = std::exp(e.log_value);
    e.exact = true;
    return e;
  }
  return gamma_like(model, kernel, 0.0, k.value, "tilde_gamma", s);
}

RegionEstimate region_tilde_eta(const RadialModel& model, const JumpKernel& kernel, const Extent& n,
                                const Extent& k, const RegionSettings& s) {
  if (auto r = kernel.finite_range(); r && k.log >= std::log(*r)) return exact_value(0.0);
  require_density(kernel);
  if (sampled(n, s)) return eta_like(model, kernel, n.value + k.value + 1.0, n.value + 1.0, "tilde_eta", s);
  if (!kernel.translation()) throw HypothesisError("radii beyond the sampling limit need a translation kernel");
  return bound_from_log(model.log_tail(add(n, k, 1.0)) + log_w(kernel, k));
}

}  // namespace pertlab
