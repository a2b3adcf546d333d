#include "pertlab/test_function.hpp"

#include <algorithm>
#include <cmath>

#include "pertlab/errors.hpp"

namespace pertlab {

TestFunction TestFunction::constant(double c) {
  TestFunction t;
  t.f_ = [c](double) { return c; };
  t.log_abs_diff_ = [](double, double) { return -kInf; };
  t.constant_ = {1};
  t.lo_ = t.hi_ = c;
  t.lip_ = 0.0;
  t.support_ = 0.0;
  t.label_ = "constant";
  return t;
}

TestFunction TestFunction::piecewise_linear(std::vector<double> xs, std::vector<double> ys, std::string label) {
  if (xs.empty() || xs.size() != ys.size()) throw ConfigError("piecewise-linear function needs matching knots");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw ConfigError("piecewise-linear knots must increase");
  TestFunction t;
  t.kx_ = xs;
  t.ky_ = ys;
  t.f_ = [xs, ys](double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
  };
  t.breaks_ = xs;
  t.constant_.assign(xs.size() + 1, 0);
  t.constant_.front() = t.constant_.back() = 1;
  double lip = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    t.constant_[i] = ys[i] == ys[i - 1];
    lip = std::max(lip, std::fabs(ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
  }
  t.lip_ = lip;
  t.lo_ = *std::min_element(ys.begin(), ys.end());
  t.hi_ = *std::max_element(ys.begin(), ys.end());
  t.support_ = std::max(std::fabs(xs.front()), std::fabs(xs.back()));
  t.label_ = label.empty() ? "piecewise_linear" : std::move(label);
  return t;
}

TestFunction TestFunction::smooth(std::function<double(double)> f, std::optional<double> lipschitz,
                                  std::optional<double> sup_norm, std::string label) {
  TestFunction t;
  t.f_ = std::move(f);
  t.constant_ = {0};
  t.lip_ = lipschitz;
  t.sup_ = sup_norm;
  if (sup_norm) {
    t.lo_ = -*sup_norm;
    t.hi_ = *sup_norm;
  }
  t.label_ = label.empty() ? "smooth" : std::move(label);
  return t;
}

TestFunction TestFunction::custom(std::function<double(double)> f, std::function<double(double)> log_abs,
                                  std::function<double(double, double)> log_abs_diff, std::vector<double> breaks,
                                  std::vector<char> constant_piece, std::string label) {
  if (constant_piece.size() != breaks.size() + 1) throw ConfigError("one constant flag per piece is required");
  TestFunction t;
  t.f_ = std::move(f);
  t.log_abs_ = std::move(log_abs);
  t.log_abs_diff_ = std::move(log_abs_diff);
  t.breaks_ = std::move(breaks);
  t.constant_ = std::move(constant_piece);
  if (t.constant_.front() && t.constant_.back() && !t.breaks_.empty())
    t.support_ = std::max(std::fabs(t.breaks_.front()), std::fabs(t.breaks_.back()));
  t.label_ = label.empty() ? "custom" : std::move(label);
  return t;
}

std::size_t TestFunction::piece_of(double x) const {
  return static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
}

bool TestFunction::is_constant() const {
  if (!std::all_of(constant_.begin(), constant_.end(), [](char c) { return c != 0; })) return false;
  if (breaks_.empty()) return true;
  const double v = f_(breaks_.front());
  return std::all_of(breaks_.begin(), breaks_.end(), [&](double b) { return f_(b) == v; });
}

TestFunction TestFunction::affine(double a, double b) const {
  TestFunction t = *this;
  auto f = f_;
  t.f_ = [f, a, b](double x) { return a * f(x) + b; };
  if (b == 0.0 && log_abs_) {
    auto la = log_abs_;
    const double lga = std::log(std::fabs(a));
    t.log_abs_ = [la, lga](double x) { return lga + la(x); };
  } else {
    t.log_abs_ = nullptr;
  }
  if (log_abs_diff_) {
    auto ld = log_abs_diff_;
    const double lga = a == 0.0 ? -kInf : std::log(std::fabs(a));
    t.log_abs_diff_ = [ld, lga](double x, double y) { return lga + ld(x, y); };
  }
  for (double& y : t.ky_) y = a * y + b;
  const double l = a * lo_ + b, h = a * hi_ + b;
  t.lo_ = std::min(l, h);
  t.hi_ = std::max(l, h);
  if (sup_) t.sup_.reset();
  if (lip_) t.lip_ = std::fabs(a) * *lip_;
  if (a == 0.0) {
    std::fill(t.constant_.begin(), t.constant_.end(), 1);
    t.lip_ = 0.0;
  }
  return t;
}

TestFunction TestFunction::clipped(double c, double w) const {
  if (kx_.empty()) throw HypothesisError("clipping is implemented for piecewise-linear functions");
  auto g = [c, w](double v) { return std::min(std::max(v - c, 0.0), w); };
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < kx_.size(); ++i) {
    if (i > 0) {
      // Add the crossings of the levels c and c + w inside the segment.
      const double y0 = ky_[i - 1], y1 = ky_[i];
      std::vector<double> cuts;
      for (double level : {c, c + w}) {
        if ((y0 - level) * (y1 - level) < 0.0) cuts.push_back(kx_[i - 1] + (level - y0) / (y1 - y0) * (kx_[i] - kx_[i - 1]));
      }
      std::sort(cuts.begin(), cuts.end());
      for (double x : cuts) {
        if (x > xs.back()) {
          xs.push_back(x);
          ys.push_back(g(f_(x)));
        }
      }
    }
    if (xs.empty() || kx_[i] > xs.back()) {
      xs.push_back(kx_[i]);
      ys.push_back(g(ky_[i]));
    }
  }
  auto t = piecewise_linear(xs, ys, label_ + "_clipped");
  return t;
}

}  // namespace pertlab
