#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "cex/errors.hpp"

namespace cex {

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  std::int64_t evals = 0;
};

namespace detail {

struct AdaptiveState {
  const std::function<double(double)>& f;
  double tol;
  std::int64_t evals = 0;
  std::int64_t max_evals;
  bool budget_hit = false;

  double call(double x) {
    ++evals;
    return f(x);
  }
};

inline double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

inline double adapt(AdaptiveState& st, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  if (st.evals + 2 > st.max_evals || depth <= 0) {
    st.budget_hit = true;
    return whole;
  }
  double flm = st.call(lm), frm = st.call(rm);
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction. `converged` goes false when
/// the node budget or recursion depth was exhausted before the tolerance held.
inline IntegralResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                         double tol = 1e-10, std::int64_t max_evals = 4000000,
                                         int max_depth = 52) {
  IntegralResult res;
  if (!(hi > lo)) return res;
  detail::AdaptiveState st{f, tol, 0, max_evals, false};
  double fa = st.call(lo), fb = st.call(hi), fm = st.call(0.5 * (lo + hi));
  double whole = detail::simpson(fa, fm, fb, hi - lo);
  res.value = detail::adapt(st, lo, hi, fa, fm, fb, whole, tol, max_depth);
  res.error_estimate = tol;
  res.converged = !st.budget_hit;
  res.evals = st.evals;
  return res;
}

/// Midpoint product rule over Q = [0,1]^2 with doubling resolution until two
/// successive estimates agree to `tol` relatively.
inline IntegralResult integrate_square_midpoint(const std::function<double(double, double)>& f, double tol = 1e-7,
                                                int start_cells = 64, int max_cells = 4096) {
  IntegralResult res;
  double prev = 0.0;
  bool have_prev = false;
  double diff = HUGE_VAL;
  for (int n = start_cells; n <= max_cells; n *= 2) {
    double h = 1.0 / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = (i + 0.5) * h;
      for (int j = 0; j < n; ++j) sum += f(x, (j + 0.5) * h);
    }
    sum *= h * h;
    res.evals += static_cast<std::int64_t>(n) * n;
    res.value = sum;
    if (have_prev) diff = std::fabs(sum - prev);
    if (have_prev && diff <= tol * std::max(1.0, std::fabs(sum))) {
      res.error_estimate = diff;
      res.converged = true;
      return res;
    }
    prev = sum;
    have_prev = true;
  }
  res.converged = false;
  res.error_estimate = diff;
  return res;
}

}  // namespace cex
