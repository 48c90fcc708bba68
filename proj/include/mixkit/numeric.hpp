#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "mixkit/errors.hpp"

namespace mixkit {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

namespace detail {

inline void simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                             double fa, double fm, double fb, double whole, double tol,
                             int depth, QuadratureResult& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    out.value += left + right + delta / 15.0;
    out.error_estimate += std::abs(delta);
    out.converged = false;
    return;
  }
  if (std::abs(delta) <= 15.0 * tol) {
    out.value += left + right + delta / 15.0;
    out.error_estimate += std::abs(delta) / 15.0;
    return;
  }
  simpson_adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  simpson_adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

// Adaptive Simpson on a finite interval, absolute tolerance.
inline QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                           double b, double abs_tol = 1e-10,
                                           int max_depth = 48) {
  QuadratureResult out;
  if (a == b) return out;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
    out.converged = false;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::simpson_adaptive(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, out);
  return out;
}

// Bracketed root of a nondecreasing function: secant step when it stays
// inside the bracket, bisection otherwise. Requires f(lo) <= 0 <= f(hi).
inline double solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                              double x_tol = 1e-12, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw NumericalError("solve_bracketed: root not bracketed");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int i = 0; i < max_iter; ++i) {
    double x;
    const double denom = fhi - flo;
    if (denom > 0.0) {
      x = lo - flo * (hi - lo) / denom;
      const double margin = 0.01 * (hi - lo);
      if (!(x > lo + margin && x < hi - margin)) x = 0.5 * (lo + hi);
    } else {
      x = 0.5 * (lo + hi);
    }
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= x_tol * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// Piecewise-linear table on ascending abscissae. Clamped to the first value
// on the left, zero beyond the last point (tables describe compactly
// supported tails).
class InterpTable {
 public:
  InterpTable() = default;
  InterpTable(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() < 2 || x_.size() != y_.size())
      throw DomainError("InterpTable: need at least two (x, y) points");
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1])) throw DomainError("InterpTable: abscissae must be ascending");
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return 0.0;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin());
    const double t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
    return y_[i - 1] + t * (y_[i] - y_[i - 1]);
  }

  bool empty() const { return x_.empty(); }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

  bool nonincreasing() const {
    for (std::size_t i = 1; i < y_.size(); ++i)
      if (y_[i] > y_[i - 1] + 1e-15) return false;
    return true;
  }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

}  // namespace mixkit
