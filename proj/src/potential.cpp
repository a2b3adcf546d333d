#include "pertlab/potential.hpp"

#include <algorithm>
#include <cmath>

#include "pertlab/errors.hpp"

namespace pertlab {

namespace {

// log(1 + r) given log r, usable beyond the double range of r.
double log1p_at_log(double log_r) { return log1p_exp(log_r); }

}  // namespace

Potential Potential::zero() { return constant(0.0); }

Potential Potential::constant(double c) {
  Potential p;
  p.label_ = c == 0.0 ? "zero" : "constant";
  p.zero_ = true;
  p.monotone_ = 1;
  p.v0_ = [c](double) { return c; };
  p.v0_at_log_ = [c](double) { return c; };
  p.kappa1_ = 0.0;
  return p;
}

Potential Potential::loglog(double eps) {
  Potential p;
  p.label_ = "loglog";
  p.monotone_ = eps >= 0.0 ? 1 : -1;
  p.v0_ = [eps](double x) { return eps * std::log(std::log(M_E + std::fabs(x))); };
  p.v0_at_log_ = [eps](double u) { return eps * std::log(log_add_exp(1.0, u)); };
  return p;
}

Potential Potential::log1p(double eps) {
  Potential p;
  p.label_ = "log1p";
  p.monotone_ = eps >= 0.0 ? 1 : -1;
  p.v0_ = [eps](double x) { return eps * std::log1p(std::fabs(x)); };
  p.v0_at_log_ = [eps](double u) { return eps * log1p_at_log(u); };
  return p;
}

Potential Potential::power(double c, double pw) {
  if (!(pw > 0.0)) throw ConfigError("power potential needs a positive exponent");
  Potential p;
  p.label_ = "power";
  p.monotone_ = c >= 0.0 ? 1 : -1;
  p.v0_ = [c, pw](double x) { return c * std::pow(std::fabs(x), pw); };
  p.v0_at_log_ = [c, pw](double u) { return c == 0.0 ? 0.0 : c * std::exp(pw * u); };
  return p;
}

Potential Potential::loglog_psi(double eps, double phi_scale) {
  if (!(phi_scale > 0.0)) throw ConfigError("phi_scale must be positive");
  Potential p;
  p.label_ = "loglog_psi";
  p.monotone_ = eps >= 0.0 ? 1 : 0;
  auto at_l1p = [eps, phi_scale](double loglog_e, double l1p) {
    return eps * loglog_e + std::min(std::log1p(l1p), phi_scale * l1p);
  };
  p.v0_ = [at_l1p](double x) {
    const double r = std::fabs(x);
    return at_l1p(std::log(std::log(M_E + r)), std::log1p(r));
  };
  p.v0_at_log_ = [at_l1p](double u) { return at_l1p(std::log(log_add_exp(1.0, u)), log1p_at_log(u)); };
  return p;
}

Potential Potential::log1p_phi(double eps, double phi_scale) {
  if (!(phi_scale > 0.0)) throw ConfigError("phi_scale must be positive");
  Potential p;
  p.label_ = "log1p_phi";
  p.monotone_ = eps >= 0.0 ? 1 : 0;
  p.v0_ = [eps, phi_scale](double x) {
    const double l = std::log1p(std::fabs(x));
    return eps * l + phi_scale * std::log1p(l);
  };
  p.v0_at_log_ = [eps, phi_scale](double u) {
    const double l = log1p_at_log(u);
    return eps * l + phi_scale * std::log1p(l);
  };
  return p;
}

Potential Potential::cosine(double a, double omega, double h) {
  if (!(omega > 0.0)) throw ConfigError("cosine potential needs omega > 0");
  Potential p = custom([a, omega](double x) { return a * std::cos(omega * x); }, h, "cosine");
  p.period_ = 2.0 * M_PI / omega;
  p.kappa1_ = std::max(std::fabs(a) * omega, 2.0 * std::fabs(a));
  return p;
}

Potential Potential::sawtooth(double H, double kappa, double L) {
  if (!(H > 4.0)) throw ConfigError("sawtooth needs H > 4");
  if (!(kappa > 1.0)) throw ConfigError("sawtooth needs kappa > 1");
  const double bound = kappa * std::pow(H, kappa) / (H - 2.0);
  if (!(L > bound))
    throw ConfigError("sawtooth needs L > kappa H^kappa / (H - 2) = " + std::to_string(bound));
  Potential p;
  p.label_ = "sawtooth";
  p.mode_ = ExtremaMode::segments;
  p.radial_ = false;
  p.spacing_ = H;
  p.horizon_ = 64.0 * H;
  p.saw_ = std::array<double, 3>{H, kappa, L};
  p.v0_ = [H, kappa, L](double x) {
    if (x < H) return 0.0;
    const double n = std::floor(x / H);
    return L * std::pow(n + 1.0, kappa - 1.0) * (2.0 * n + 1.0 - 2.0 * x / H);
  };
  return p;
}

Potential Potential::custom(std::function<double(double)> v0, double h, std::string label) {
  Potential p;
  p.label_ = label.empty() ? "custom" : std::move(label);
  p.mode_ = ExtremaMode::grid;
  p.radial_ = false;
  p.h_ = h;
  p.v0_ = std::move(v0);
  return p;
}

Potential Potential::normalized(const RadialModel& model, double rel_tol) const {
  Potential out = *this;
  out.K0_ = 0.0;
  out.K0_ = -out.log_mu_exp(model, 1.0, rel_tol);
  return out;
}

double Potential::radial_at_log(double log_r) const {
  if (log_r < 700.0) return v0_(std::exp(log_r));
  return v0_at_log_(log_r);
}

double Potential::sup_base(double R) const {
  switch (mode_) {
    case ExtremaMode::monotone_radial:
      if (zero_) return v0_(0.0);
      return monotone_ >= 0 ? v0_(R) : v0_(0.0);
    case ExtremaMode::segments: {
      const auto [H, kappa, L] = *saw_;
      if (R < H) return 0.0;
      return L * std::pow(std::floor(R / H) + 1.0, kappa - 1.0);
    }
    case ExtremaMode::grid:
      break;
  }
  if (!(h_ > 0.0)) throw ConfigError("grid extrema need a declared resolution h > 0");
  const double reach = period_ > 0.0 ? std::min(R, period_) : R;
  const double count = std::ceil(reach / h_);
  if (count > 1e7) throw ConfigError("grid extrema: radius too large for resolution");
  double best = std::max(v0_(reach), v0_(-reach));
  for (long i = -static_cast<long>(count); i <= static_cast<long>(count); ++i) {
    const double x = std::clamp(i * h_, -reach, reach);
    best = std::max(best, v0_(x));
  }
  return best;
}

double Potential::inf_base(double R) const {
  switch (mode_) {
    case ExtremaMode::monotone_radial:
      if (zero_) return v0_(0.0);
      return monotone_ >= 0 ? v0_(0.0) : v0_(R);
    case ExtremaMode::segments: {
      const auto [H, kappa, L] = *saw_;
      const double nR = std::floor(R / H);
      if (nR < 1.0) return 0.0;
      auto K = [&](double n) { return L * std::pow(n + 1.0, kappa - 1.0); };
      // Full segments approach -K_n at their right ends.
      double low = nR >= 2.0 ? -K(nR - 1.0) : 0.0;
      low = std::min(low, K(nR) * (2.0 * nR + 1.0 - 2.0 * R / H));
      return std::min(0.0, low);
    }
    case ExtremaMode::grid:
      break;
  }
  if (!(h_ > 0.0)) throw ConfigError("grid extrema need a declared resolution h > 0");
  const double reach = period_ > 0.0 ? std::min(R, period_) : R;
  const double count = std::ceil(reach / h_);
  if (count > 1e7) throw ConfigError("grid extrema: radius too large for resolution");
  double best = std::min(v0_(reach), v0_(-reach));
  for (long i = -static_cast<long>(count); i <= static_cast<long>(count); ++i) {
    const double x = std::clamp(i * h_, -reach, reach);
    best = std::min(best, v0_(x));
  }
  return best;
}

double Potential::ball_sup(double R) const { return sup_base(R) + K0_; }
double Potential::ball_inf(double R) const { return inf_base(R) + K0_; }

double Potential::ball_sup(const Extent& R) const {
  if (R.exact()) return ball_sup(R.value);
  if (mode_ == ExtremaMode::monotone_radial) {
    if (zero_) return v0_(0.0) + K0_;
    return (monotone_ >= 0 ? radial_at_log(R.log) : v0_(0.0)) + K0_;
  }
  if (mode_ == ExtremaMode::segments) {
    const auto [H, kappa, L] = *saw_;
    return L * std::exp((kappa - 1.0) * (R.log - std::log(H))) + K0_;
  }
  if (period_ > 0.0) return ball_sup(period_);
  throw ConfigError("grid extrema: radius too large for resolution");
}

double Potential::ball_inf(const Extent& R) const {
  if (R.exact()) return ball_inf(R.value);
  if (mode_ == ExtremaMode::monotone_radial) {
    if (zero_) return v0_(0.0) + K0_;
    return (monotone_ >= 0 ? v0_(0.0) : radial_at_log(R.log)) + K0_;
  }
  if (mode_ == ExtremaMode::segments) {
    const auto [H, kappa, L] = *saw_;
    return -L * std::exp((kappa - 1.0) * (R.log - std::log(H))) + K0_;
  }
  if (period_ > 0.0) return ball_inf(period_);
  throw ConfigError("grid extrema: radius too large for resolution");
}

std::vector<double> Potential::breakpoints(double R) const {
  std::vector<double> out;
  if (mode_ == ExtremaMode::segments) {
    const double top = std::min(R, horizon_);
    for (double x = spacing_; x <= top; x += spacing_) out.push_back(x);
  }
  return out;
}

double Potential::log_mu_exp(const RadialModel& model, double scale, double rel_tol) const {
  if (zero_) {
    return scale * (v0_(0.0) + K0_);
  }
  LogQuadOptions opt;
  opt.rel_tol = rel_tol;
  try {
    if (model.is_abstract()) throw HypothesisError("abstract model only admits constant potentials");
    double v;
    if (radial_) {
      v = model.log_integrate_radial([&](double r) { return scale * v0_(r); }, {}, opt).log_value;
    } else {
      if (model.dim() != 1) throw ConfigError("non-radial potentials are only supported in dimension 1");
      v = model.log_integrate_line([&](double x) { return scale * v0_(x); }, breakpoints(horizon_), opt)
              .log_value;
    }
    if (!std::isfinite(v)) throw NonNormalizableError("mu(e^V) is zero or infinite");
    return v + scale * K0_;
  } catch (const DivergenceError& e) {
    throw NonNormalizableError(std::string("mu(e^V) diverges: ") + e.what());
  }
}

double Potential::log_muV_tail(const RadialModel& model, double t, double rel_tol) const {
  if (zero_ && model.is_abstract()) return model.log_tail(t) + v0_(0.0) + K0_;
  LogQuadOptions opt;
  opt.rel_tol = rel_tol;
  if (radial_) {
    auto g = [&](double r) { return r > t ? v0_(r) + K0_ : -kInf; };
    return model.log_integrate_radial(g, {t}, opt).log_value;
  }
  if (model.dim() != 1) throw ConfigError("non-radial potentials are only supported in dimension 1");
  auto br = breakpoints(horizon_);
  br.push_back(t);
  br.push_back(-t);
  auto g = [&](double x) { return std::fabs(x) > t ? v0_(x) + K0_ : -kInf; };
  return model.log_integrate_line(g, br, opt).log_value;
}

}  // namespace pertlab
