#include "pertlab/families.hpp"

#include <algorithm>
#include <cmath>

#include "pertlab/errors.hpp"
#include "pertlab/growth.hpp"
#include "pertlab/quadrature.hpp"
#include "pertlab/special.hpp"

namespace pertlab {

namespace {

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

// Radial function h(|x|). flat[i] tells whether h is constant on
// [radii[i-1], radii[i]]; flat[0] covers [0, radii[0]] and flat.back() the
// unbounded piece.
TestFunction radial_steps(std::function<double(double)> h, std::vector<double> radii, std::vector<char> flat,
                          std::string label) {
  if (radii.front() == 0.0) {
    radii.erase(radii.begin());
    flat.erase(flat.begin());
  }
  const std::size_t m = radii.size();
  std::vector<double> breaks;
  std::vector<char> pieces;
  for (std::size_t i = m; i-- > 0;) breaks.push_back(-radii[i]);
  for (double r : radii) breaks.push_back(r);
  for (std::size_t i = m; i > 0; --i) pieces.push_back(flat[i]);
  pieces.push_back(flat[0]);
  for (std::size_t i = 1; i <= m; ++i) pieces.push_back(flat[i]);
  auto f = [h](double x) { return h(std::fabs(x)); };
  auto t = TestFunction::custom(f, {}, {}, breaks, pieces, std::move(label));
  t.set_range(0.0, 1.0).set_lipschitz(1.5);
  return t;
}

}  // namespace

FamilyKind family_kind(const std::string& name) {
  if (name == "ramp") return FamilyKind::ramp;
  if (name == "sawtooth-exp" || name == "sawtooth_exp") return FamilyKind::sawtooth_exp;
  if (name == "cutoff-l" || name == "cutoff_l") return FamilyKind::cutoff_l;
  if (name == "cutoff-g" || name == "cutoff_g") return FamilyKind::cutoff_g;
  if (name == "truncation") return FamilyKind::truncation;
  throw ConfigError("unknown family '" + name + "'");
}

std::string family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::ramp: return "ramp";
    case FamilyKind::sawtooth_exp: return "sawtooth-exp";
    case FamilyKind::cutoff_l: return "cutoff-l";
    case FamilyKind::cutoff_g: return "cutoff-g";
    case FamilyKind::truncation: return "truncation";
  }
  return "ramp";
}

TestFunction ramp(double n) {
  if (!(n >= 1.0)) throw ConfigError("ramp needs n >= 1");
  auto t = TestFunction::piecewise_linear({-2.0 * n, -n, n, 2.0 * n}, {1.0, 0.0, 0.0, 1.0}, "ramp");
  return t;
}

TestFunction cutoff_l(double n) {
  if (!(n >= 1.0)) throw ConfigError("cutoff-l needs n >= 1");
  auto h = [n](double r) {
    if (r <= n) return smoothstep(r - (n - 1.0));
    if (r <= n + 1.0) return 1.0;
    return 1.0 - smoothstep(r - (n + 1.0));
  };
  return radial_steps(h, {n - 1.0, n, n + 1.0, n + 2.0}, {1, 0, 1, 0, 1}, "cutoff-l");
}

TestFunction cutoff_g(double n) {
  if (!(n >= 1.0)) throw ConfigError("cutoff-g needs n >= 1");
  auto h = [n](double r) { return 1.0 - smoothstep(r - n); };
  return radial_steps(h, {n, n + 1.0}, {1, 0, 1}, "cutoff-g");
}

TestFunction sawtooth_exp(double H, double kappa, double L, double n) {
  Potential::sawtooth(H, kappa, L);  // validates the parameters
  if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("sawtooth-exp needs an integer n >= 1");
  const double a = H * n + 1.0, b = H * (n + 1.0) - 1.0;
  const double Kn = L * std::pow(n + 1.0, kappa - 1.0);
  // On (a, b): y^kappa - V0(y) = y^kappa + 2 Kn y / H - Kn (2n + 1).
  std::function<double(double, double)> log_int;
  std::function<double(double)> log_g;
  if (kappa == 2.0) {
    const double s = Kn / H;
    log_int = [s](double lo, double hi) { return log_int_exp_square(lo + s, hi + s); };
    log_g = [s](double y) { return (y + s) * (y + s); };
  } else {
    log_g = [kappa, Kn, H](double y) { return std::pow(y, kappa) + 2.0 * Kn * y / H; };
    log_int = [log_g](double lo, double hi) {
      LogQuadOptions opt;
      opt.rel_tol = 1e-12;
      return log_integrate(log_g, {lo, hi}, opt).log_value;
    };
  }
  const double Gb = log_int(a, b);
  auto f = [=](double x) {
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    return std::exp(log_int(a, x) - Gb);
  };
  auto log_abs = [=](double x) {
    if (x <= a) return -kInf;
    if (x >= b) return 0.0;
    return log_int(a, x) - Gb;
  };
  auto log_diff = [=](double x, double y) {
    double lo = std::clamp(std::min(x, y), a, b), hi = std::clamp(std::max(x, y), a, b);
    if (!(hi > lo)) return -kInf;
    return log_int(lo, hi) - Gb;
  };
  auto t = TestFunction::custom(f, log_abs, log_diff, {a, b}, {1, 0, 1}, "sawtooth-exp");
  t.set_range(0.0, 1.0).set_lipschitz(std::exp(std::max(log_g(a), log_g(b)) - Gb));
  return t;
}

TestFunction make_family(const FamilySpec& s) {
  switch (s.kind) {
    case FamilyKind::ramp: return ramp(s.n);
    case FamilyKind::cutoff_l: return cutoff_l(s.n);
    case FamilyKind::cutoff_g: return cutoff_g(s.n);
    case FamilyKind::sawtooth_exp: return sawtooth_exp(s.H, s.kappa, s.L, s.n);
    case FamilyKind::truncation: {
      if (!(s.delta > 1.0)) throw ConfigError("truncation needs delta > 1");
      if (s.i < 0) throw ConfigError("truncation needs i >= 0");
      const double lo = std::pow(s.delta, 0.5 * s.i), hi = std::pow(s.delta, 0.5 * (s.i + 1));
      return ramp(s.n).affine(s.scale, 0.0).clipped(lo, hi - lo);
    }
  }
  throw ConfigError("unknown family");
}

double truncate(double f, double delta, int i) {
  const double lo = std::pow(delta, 0.5 * i), hi = std::pow(delta, 0.5 * (i + 1));
  return std::min(std::max(f - lo, 0.0), hi - lo);
}

double truncation_slack(double f, double delta, int k) {
  double sum = 0.0;
  for (int i = k;; ++i) {
    const double lo = std::pow(delta, 0.5 * i);
    if (lo >= f) break;
    const double v = truncate(f, delta, i);
    sum += v * v;
  }
  const double p = std::max(f - std::pow(delta, 0.5 * k), 0.0);
  return sum - c_delta(delta) * p * p;
}

}  // namespace pertlab
