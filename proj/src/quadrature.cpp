#include "pertlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "pertlab/errors.hpp"
#include "pertlab/extended.hpp"

namespace pertlab {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double log_value;
  double log_error;
};

void panel_nodes(double a, double b, double* x) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int j = 0; j < 7; ++j) {
    x[2 * j] = c - h * kXgk[j];
    x[2 * j + 1] = c + h * kXgk[j];
  }
  x[14] = c;
}

Panel reduce_panel(double a, double b, const double* lv) {
  double m = -kInf;
  for (int i = 0; i < 15; ++i) {
    if (std::isnan(lv[i])) throw DivergenceError("log-domain quadrature: integrand returned NaN");
    m = std::max(m, lv[i]);
  }
  Panel p{a, b, -kInf, -kInf};
  if (m == -kInf) return p;
  if (m == kInf) {
    p.log_value = kInf;
    p.log_error = kInf;
    return p;
  }
  double k = 0.0, g = 0.0;
  for (int j = 0; j < 7; ++j) {
    const double s = std::exp(lv[2 * j] - m) + std::exp(lv[2 * j + 1] - m);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  const double c = std::exp(lv[14] - m);
  k += kWgk[7] * c;
  g += kWg[3] * c;
  const double lh = std::log(0.5 * (b - a));
  p.log_value = m + lh + std::log(k);
  const double diff = std::fabs(k - g);
  // Round-off floor keeps the estimate honest when both rules agree exactly.
  p.log_error = m + lh + std::log(std::max(diff, 1e-15 * k));
  return p;
}

double lse(const std::vector<Panel>& ps, bool error) {
  double m = -kInf;
  for (const auto& p : ps) m = std::max(m, error ? p.log_error : p.log_value);
  if (m == -kInf || m == kInf) return m;
  double s = 0.0;
  for (const auto& p : ps) s += std::exp((error ? p.log_error : p.log_value) - m);
  return m + std::log(s);
}

std::vector<Panel> eval_panels(const LogBatch& f, const std::vector<std::pair<double, double>>& spans, long& evals) {
  std::vector<double> x(15 * spans.size()), lv(15 * spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) panel_nodes(spans[i].first, spans[i].second, &x[15 * i]);
  f(std::span<const double>(x), std::span<double>(lv));
  evals += static_cast<long>(x.size());
  std::vector<Panel> out;
  out.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) out.push_back(reduce_panel(spans[i].first, spans[i].second, &lv[15 * i]));
  return out;
}

}  // namespace

double LogQuadResult::rel_error() const {
  if (log_value == -kInf) return 0.0;
  return std::exp(log_error - log_value);
}

LogBatch make_batch(std::function<double(double)> log_f, Exec exec) {
  return [log_f = std::move(log_f), exec](std::span<const double> x, std::span<double> out) {
    for_each_index(exec, x.size(), [&](std::size_t i) { out[i] = log_f(x[i]); });
  };
}

LogQuadResult log_integrate(const LogBatch& f, std::vector<double> points, const LogQuadOptions& opt) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  LogQuadResult res;
  if (points.size() < 2) return res;
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) spans.emplace_back(points[i], points[i + 1]);
  std::vector<Panel> panels = eval_panels(f, spans, res.evaluations);
  const double log_tol = std::log(opt.rel_tol);
  for (;;) {
    res.log_value = lse(panels, false);
    res.log_error = lse(panels, true);
    if (res.log_value == -kInf) break;
    if (res.log_value == kInf) throw DivergenceError("log-domain quadrature: integrand is infinite");
    if (res.log_error <= res.log_value + log_tol) break;
    if (static_cast<int>(panels.size()) >= opt.max_panels) {
      res.converged = false;
      break;
    }
    // Split the worst panels carrying half of the error budget.
    std::vector<std::size_t> order(panels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return panels[i].log_error > panels[j].log_error; });
    const double target = res.log_error + std::log(0.5);
    double acc = -kInf;
    std::vector<char> split(panels.size(), 0);
    std::size_t chosen = 0;
    for (std::size_t idx : order) {
      split[idx] = 1;
      ++chosen;
      acc = log_add_exp(acc, panels[idx].log_error);
      if (acc >= target || chosen >= 64) break;
    }
    spans.clear();
    std::vector<Panel> kept;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (!split[i]) {
        kept.push_back(panels[i]);
        continue;
      }
      const double mid = 0.5 * (panels[i].a + panels[i].b);
      if (!(mid > panels[i].a && mid < panels[i].b)) {
        kept.push_back(panels[i]);
        continue;
      }
      spans.emplace_back(panels[i].a, mid);
      spans.emplace_back(mid, panels[i].b);
    }
    if (spans.empty()) {
      res.converged = false;
      break;
    }
    auto fresh = eval_panels(f, spans, res.evaluations);
    kept.insert(kept.end(), fresh.begin(), fresh.end());
    std::sort(kept.begin(), kept.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    panels = std::move(kept);
  }
  return res;
}

LogQuadResult log_integrate(const std::function<double(double)>& log_f, std::vector<double> points,
                            const LogQuadOptions& opt) {
  return log_integrate(make_batch(log_f, opt.exec), std::move(points), opt);
}

LogQuadResult log_integrate_to_infinity(const LogBatch& f, double a, std::vector<double> breaks, double first_width,
                                        const LogQuadOptions& opt) {
  std::sort(breaks.begin(), breaks.end());
  LogQuadResult res;
  res.log_value = -kInf;
  res.log_error = -kInf;
  double lo = a, width = first_width;
  std::vector<double> contrib;
  const double log_tol = std::log(opt.rel_tol);
  int rising = 0;
  for (int panel = 0; panel < 1200; ++panel) {
    const double hi = lo + width;
    if (!std::isfinite(hi)) throw DivergenceError("log-domain quadrature: tail does not decay");
    std::vector<double> pts{lo, hi};
    for (double b : breaks)
      if (b > lo && b < hi) pts.push_back(b);
    LogQuadOptions inner = opt;
    inner.rel_tol = opt.rel_tol * 0.1;
    auto part = log_integrate(f, pts, inner);
    res.evaluations += part.evaluations;
    res.converged = res.converged && part.converged;
    res.log_value = log_add_exp(res.log_value, part.log_value);
    res.log_error = log_add_exp(res.log_error, part.log_error);
    if (res.log_value > opt.log_overflow_guard) throw DivergenceError("log-domain quadrature: integral exceeds guard");
    contrib.push_back(part.log_value);
    lo = hi;
    width *= 2.0;
    const std::size_t n = contrib.size();
    const bool past_breaks = breaks.empty() || lo >= breaks.back();
    if (!past_breaks) continue;
    if (part.log_value == -kInf) {
      if (n >= 2 && contrib[n - 2] == -kInf) break;
      continue;
    }
    if (part.log_value < res.log_value + log_tol - std::log(10.0) && n >= 3) break;
    if (n >= 2 && contrib[n - 2] > -kInf) {
      rising = (part.log_value >= contrib[n - 2]) ? rising + 1 : 0;
      if (rising >= 12 && n >= 24) throw DivergenceError("log-domain quadrature: tail does not decay");
    }
    // Stable geometric decay: close with the analytic tail of the series.
    if (n >= 8 && contrib[n - 3] > -kInf) {
      const double r1 = contrib[n - 1] - contrib[n - 2];
      const double r2 = contrib[n - 2] - contrib[n - 3];
      if (r1 < -1e-3 && std::fabs(r1 - r2) < 1e-3 * std::fabs(r1)) {
        const double rho = std::exp(r1);
        const double tail = part.log_value + r1 - std::log1p(-rho);
        if (tail < res.log_value + log_tol) {
          res.log_value = log_add_exp(res.log_value, tail);
          res.log_error = log_add_exp(res.log_error, tail + std::log(1e-3));
          return res;
        }
      }
    }
  }
  if (rising > 0) throw DivergenceError("log-domain quadrature: tail does not decay");
  return res;
}

LogQuadResult log_integrate_to_infinity(const std::function<double(double)>& log_f, double a,
                                        std::vector<double> breaks, double first_width, const LogQuadOptions& opt) {
  return log_integrate_to_infinity(make_batch(log_f, opt.exec), a, std::move(breaks), first_width, opt);
}

double integrate(const std::function<double(double)>& f, std::vector<double> points, double rel_tol,
                 double* abs_error) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  struct Seg {
    double a, b, k, err;
  };
  auto eval = [&](double a, double b) {
    double x[15];
    panel_nodes(a, b, x);
    double k = 0.0, g = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double s = f(x[2 * j]) + f(x[2 * j + 1]);
      k += kWgk[j] * s;
      if (j % 2 == 1) g += kWg[j / 2] * s;
    }
    const double c = f(x[14]);
    k += kWgk[7] * c;
    g += kWg[3] * c;
    const double h = 0.5 * (b - a);
    return Seg{a, b, k * h, std::fabs(k - g) * h};
  };
  std::vector<Seg> segs;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) segs.push_back(eval(points[i], points[i + 1]));
  double total = 0.0, err = 0.0;
  for (int iter = 0; iter < 20000; ++iter) {
    total = 0.0;
    err = 0.0;
    double scale = 0.0;
    for (const auto& s : segs) {
      total += s.k;
      err += s.err;
      scale += std::fabs(s.k);
    }
    if (err <= rel_tol * scale || err < 1e-300) break;
    auto worst = std::max_element(segs.begin(), segs.end(), [](const Seg& p, const Seg& q) { return p.err < q.err; });
    const double mid = 0.5 * (worst->a + worst->b);
    if (!(mid > worst->a && mid < worst->b)) break;
    const Seg left = eval(worst->a, mid), right = eval(mid, worst->b);
    *worst = left;
    segs.push_back(right);
  }
  if (abs_error) *abs_error = err;
  return total;
}

}  // namespace pertlab
