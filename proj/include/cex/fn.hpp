#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cex/errors.hpp"
#include "cex/interval.hpp"
#include "cex/pathology.hpp"
#include "cex/rational.hpp"
#include "cex/zigzag.hpp"

namespace cex {

/// Exact piecewise-linear data: strictly increasing rational breakpoints with
/// rational values, continuous linear interpolation in between.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<Rational> xs, std::vector<Rational> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size())
      throw ParameterError("piecewise-linear data needs matching breakpoint/value lists");
    for (std::size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i - 1] < xs_[i])) throw ParameterError("piecewise-linear breakpoints must strictly increase");
    xs_d_.reserve(xs_.size());
    ys_d_.reserve(ys_.size());
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      xs_d_.push_back(xs_[i].to_double());
      ys_d_.push_back(ys_[i].to_double());
    }
  }

  const std::vector<Rational>& breakpoints() const { return xs_; }
  const std::vector<Rational>& values() const { return ys_; }
  const std::vector<double>& breakpoints_d() const { return xs_d_; }
  const std::vector<double>& values_d() const { return ys_d_; }
  Rational domain_lo() const { return xs_.front(); }
  Rational domain_hi() const { return xs_.back(); }

  /// Stored value exactly at a breakpoint, linear interpolation elsewhere.
  double eval(double x) const {
    auto it = std::lower_bound(xs_d_.begin(), xs_d_.end(), x);
    if (it != xs_d_.end() && *it == x) return ys_d_[static_cast<std::size_t>(it - xs_d_.begin())];
    if (it == xs_d_.begin()) return ys_d_.front();
    if (it == xs_d_.end()) return ys_d_.back();
    std::size_t i = static_cast<std::size_t>(it - xs_d_.begin()) - 1;
    double t = (x - xs_d_[i]) / (xs_d_[i + 1] - xs_d_[i]);
    return ys_d_[i] + (ys_d_[i + 1] - ys_d_[i]) * t;
  }

  Rational eval_exact(const Rational& x) const {
    if (x < xs_.front() || x > xs_.back()) throw DomainError("exact evaluation outside breakpoint range");
    std::size_t lo = 0, hi = xs_.size() - 1;
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (xs_[mid] <= x)
        lo = mid;
      else
        hi = mid;
    }
    if (x == xs_[lo]) return ys_[lo];
    if (x == xs_[hi]) return ys_[hi];
    return ys_[lo] + (ys_[hi] - ys_[lo]) * (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
  }

  /// Exact total variation over [lo, hi] (clamped to the breakpoint range):
  /// the variation of a piecewise-linear function is the sum of |value jumps|
  /// over the breakpoint partition, and no refinement increases it.
  Rational variation_exact(Rational lo, Rational hi) const {
    if (lo < xs_.front()) lo = xs_.front();
    if (hi > xs_.back()) hi = xs_.back();
    if (!(lo < hi)) return Rational();
    Rational total;
    Rational prev = eval_exact(lo);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (xs_[i] <= lo) continue;
      if (xs_[i] >= hi) break;
      total += (ys_[i] - prev).abs();
      prev = ys_[i];
    }
    total += (eval_exact(hi) - prev).abs();
    return total;
  }

  Rational total_variation_exact() const { return variation_exact(xs_.front(), xs_.back()); }

  /// Largest |slope| over all linear pieces.
  Rational max_abs_slope() const {
    Rational best;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      Rational s = ((ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i])).abs();
      if (s > best) best = s;
    }
    return best;
  }

  /// Exact Lebesgue measure of {x : |f(x)| >= alpha}, alpha > 0.
  Rational distribution_exact(const Rational& alpha) const {
    if (alpha.sign() <= 0) return xs_.back() - xs_.front();
    Rational total;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      total += segment_ge(xs_[i], xs_[i + 1], ys_[i], ys_[i + 1], alpha);
      total += segment_ge(xs_[i], xs_[i + 1], -ys_[i], -ys_[i + 1], alpha);
    }
    return total;
  }

 private:
  std::vector<Rational> xs_, ys_;
  std::vector<double> xs_d_, ys_d_;

  // measure of {t in [x0,x1] : y(t) >= alpha} for the linear y0 -> y1
  static Rational segment_ge(const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1,
                             const Rational& alpha) {
    bool g0 = y0 >= alpha, g1 = y1 >= alpha;
    Rational len = x1 - x0;
    if (g0 && g1) return len;
    if (!g0 && !g1) return Rational();
    Rational t = x0 + (alpha - y0) * (x1 - x0) / (y1 - y0);  // crossing point
    return g0 ? t - x0 : x1 - t;
  }
};

/// Exact step function on left-closed dyadic cells; value v_i on [c_i, c_{i+1}).
class StepFunction {
 public:
  StepFunction(std::vector<Rational> cuts, std::vector<Rational> values)
      : cuts_(std::move(cuts)), values_(std::move(values)) {
    if (cuts_.size() < 2 || cuts_.size() != values_.size() + 1)
      throw ParameterError("step function needs n+1 cuts for n values");
    for (std::size_t i = 1; i < cuts_.size(); ++i)
      if (!(cuts_[i - 1] < cuts_[i])) throw ParameterError("step function cuts must strictly increase");
  }

  const std::vector<Rational>& cuts() const { return cuts_; }
  const std::vector<Rational>& values() const { return values_; }

  double eval(double x) const {
    double lo = cuts_.front().to_double(), hi = cuts_.back().to_double();
    if (x < lo || x > hi) throw DomainError("step function evaluated outside its domain");
    std::size_t i = 0;
    for (; i + 1 < values_.size(); ++i)
      if (x < cuts_[i + 1].to_double()) break;
    return values_[i].to_double();
  }

  /// Pointwise difference on the merged cell grid.
  friend StepFunction operator-(const StepFunction& a, const StepFunction& b) {
    std::vector<Rational> cuts;
    std::merge(a.cuts_.begin(), a.cuts_.end(), b.cuts_.begin(), b.cuts_.end(), std::back_inserter(cuts));
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Rational> vals;
    vals.reserve(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Rational mid = (cuts[i] + cuts[i + 1]) / Rational(2);
      vals.push_back(a.value_at(mid) - b.value_at(mid));
    }
    return StepFunction(std::move(cuts), std::move(vals));
  }

  /// Exact measure of {|f| >= alpha}.
  Rational distribution_exact(const Rational& alpha) const {
    Rational total;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i].abs() >= alpha || alpha.sign() <= 0) total += cuts_[i + 1] - cuts_[i];
    return total;
  }

  /// Exact integral of |f|^p for integer p >= 1.
  Rational lp_integral_exact(int p) const {
    if (p < 1) throw ParameterError("integer p >= 1 required for exact step integral");
    Rational total;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      Rational vp = 1;
      Rational av = values_[i].abs();
      for (int j = 0; j < p; ++j) vp *= av;
      total += vp * (cuts_[i + 1] - cuts_[i]);
    }
    return total;
  }

 private:
  std::vector<Rational> cuts_;
  std::vector<Rational> values_;

  Rational value_at(const Rational& x) const {
    std::size_t i = 0;
    for (; i + 1 < values_.size(); ++i)
      if (x < cuts_[i + 1]) break;
    return values_[i];
  }
};

/// One-variable function descriptor: an evaluator plus whatever exact or
/// analytic structure the construction behind it can offer.
struct Fn1 {
  std::string name;
  Interval domain{0.0, 1.0};
  std::function<double(double)> f;
  std::vector<std::string> parents;

  std::shared_ptr<const PiecewiseLinear> exact;       // exact PL representation
  std::shared_ptr<const StepFunction> step;           // exact step representation
  std::shared_ptr<const ZigzagMap> zigzag;            // zigzag structure
  std::shared_ptr<const PathologySurface> diagonal_of;  // diagonal of a pyramid sum

  bool singular_left = false;  // integrable singularity at domain.lo
  std::function<double(double)> analytic_distribution;     // alpha -> lambda(|f| >= alpha)
  std::function<double(double)> analytic_lp_integral;      // p -> int |f|^p
  std::function<double(double, double)> lp_tail;           // (p, eps) -> int_lo^{lo+eps} |f|^p
  std::optional<double> lipschitz_bound;                   // known analytic constant

  double operator()(double x) const {
    double slack = 1e-12 * std::max(1.0, std::max(std::fabs(domain.lo), std::fabs(domain.hi)));
    if (!domain.contains(x, slack))
      throw DomainError("'" + name + "' evaluated outside [" + std::to_string(domain.lo) + ", " +
                        std::to_string(domain.hi) + "] at x = " + std::to_string(x));
    return f(std::clamp(x, domain.lo, domain.hi));
  }
};

/// Two-variable function descriptor on Q = [0,1]^2.
struct Fn2 {
  std::string name;
  std::function<double(double, double)> f;
  std::vector<std::string> parents;

  std::shared_ptr<const PathologySurface> pyramid;  // pyramid-sum structure
  std::shared_ptr<const Fn1> lifted;                // phi(x,y) = lifted(x)

  double operator()(double x, double y) const {
    if (!(x >= -1e-12 && x <= 1.0 + 1e-12 && y >= -1e-12 && y <= 1.0 + 1e-12))
      throw DomainError("'" + name + "' evaluated outside Q at (" + std::to_string(x) + ", " +
                        std::to_string(y) + ")");
    return f(std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0));
  }
};

inline double eval1(const Fn1& fn, double x) { return fn(x); }
inline double eval2(const Fn2& fn, double x, double y) { return fn(x, y); }

enum class Axis { X, Y };

inline Fn1 from_piecewise_linear(std::string name, PiecewiseLinear pl) {
  auto shared = std::make_shared<const PiecewiseLinear>(std::move(pl));
  Fn1 fn;
  fn.name = std::move(name);
  fn.domain = Interval(shared->domain_lo().to_double(), shared->domain_hi().to_double());
  fn.exact = shared;
  fn.f = [shared](double x) { return shared->eval(x); };
  return fn;
}

/// h(t) = F(g1(t), g2(t)); inner ranges must stay in [0,1] up to 1e-9.
inline Fn1 compose2(const Fn2& outer, const Fn1& g1, const Fn1& g2) {
  auto fo = std::make_shared<const Fn2>(outer);
  auto f1 = std::make_shared<const Fn1>(g1);
  auto f2 = std::make_shared<const Fn1>(g2);
  Fn1 h;
  h.name = "compose(" + outer.name + "; " + g1.name + ", " + g2.name + ")";
  h.parents = {outer.name, g1.name, g2.name};
  h.domain = g1.domain;
  h.f = [fo, f1, f2](double t) {
    double u = (*f1)(t);
    double v = (*f2)(t);
    constexpr double tol = 1e-9;
    if (u < -tol || u > 1.0 + tol || v < -tol || v > 1.0 + tol)
      throw CompositionError("inner range escapes [0,1] at t = " + std::to_string(t) + " (values " +
                             std::to_string(u) + ", " + std::to_string(v) + ")");
    return (*fo)(std::clamp(u, 0.0, 1.0), std::clamp(v, 0.0, 1.0));
  };
  return h;
}

/// f(g(t)) for one-variable f, via the trivial lift.
inline Fn1 compose1(const Fn1& outer, const Fn1& inner) {
  auto fo = std::make_shared<const Fn1>(outer);
  auto fi = std::make_shared<const Fn1>(inner);
  Fn1 h;
  h.name = "compose(" + outer.name + "; " + inner.name + ")";
  h.parents = {outer.name, inner.name};
  h.domain = inner.domain;
  h.f = [fo, fi](double t) {
    double u = (*fi)(t);
    constexpr double tol = 1e-9;
    if (u < fo->domain.lo - tol || u > fo->domain.hi + tol)
      throw CompositionError("inner range escapes outer domain at t = " + std::to_string(t));
    return (*fo)(std::clamp(u, fo->domain.lo, fo->domain.hi));
  };
  return h;
}

/// Axis-parallel section: axis X varies x with y = level fixed, axis Y varies
/// y with x = level fixed.
inline Fn1 section(const Fn2& fn, Axis axis, double level) {
  if (!(level >= 0.0 && level <= 1.0))
    throw DomainError("section level " + std::to_string(level) + " outside [0,1]");
  if (fn.lifted && axis == Axis::X) {
    Fn1 copy = *fn.lifted;
    copy.name = "section(" + fn.name + ", y=" + std::to_string(level) + ")";
    copy.parents = {fn.name};
    return copy;
  }
  auto fo = std::make_shared<const Fn2>(fn);
  Fn1 s;
  s.domain = Interval(0.0, 1.0);
  s.parents = {fn.name};
  if (axis == Axis::X) {
    s.name = "section(" + fn.name + ", y=" + std::to_string(level) + ")";
    s.f = [fo, level](double x) { return (*fo)(x, level); };
  } else {
    s.name = "section(" + fn.name + ", x=" + std::to_string(level) + ")";
    s.f = [fo, level](double y) { return (*fo)(level, y); };
  }
  return s;
}

namespace detail {

constexpr std::int64_t kDiagonalMaterializeCap = std::int64_t(1) << 20;

/// Exact tent list of the diagonal of a pyramid-sum surface. The diagonal of
/// the pyramid on a square [a,b]^2 is the tent (a,0)-(c,peak)-(b,0); levels
/// tile their bands, so consecutive tents share endpoints.
inline PiecewiseLinear pathology_diagonal_pl(const PathologySurface& s) {
  std::vector<Rational> xs, ys;
  xs.emplace_back(0);
  ys.emplace_back(0);
  Rational left = Rational::pow2(-s.depth());
  xs.push_back(left);
  ys.emplace_back(0);
  for (int n = s.depth(); n >= 1; --n) {
    const PathologyLevel& lv = s.level(n);
    for (std::int64_t i = 1; i <= lv.k; ++i) {
      PyramidSquare sq = lv.square(i);
      if (!(xs.back() == sq.lo)) {
        xs.push_back(sq.lo);
        ys.emplace_back(0);
      }
      xs.push_back(sq.center);
      ys.push_back(lv.peak);
      xs.push_back(sq.hi);
      ys.emplace_back(0);
    }
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

}  // namespace detail

/// h(x) = F(x, x). For pyramid sums with materializable square lists this is
/// an exact piecewise-linear descriptor; otherwise the evaluator is kept and
/// the surface handle makes exact per-level variation available.
inline Fn1 diagonal(const Fn2& fn) {
  if (fn.lifted) {
    Fn1 copy = *fn.lifted;
    copy.name = "diagonal(" + fn.name + ")";
    copy.parents = {fn.name};
    return copy;
  }
  if (fn.pyramid) {
    std::int64_t total = 0;
    for (const auto& lv : fn.pyramid->levels()) total += lv.k;
    if (total <= detail::kDiagonalMaterializeCap) {
      Fn1 d = from_piecewise_linear("diagonal(" + fn.name + ")", detail::pathology_diagonal_pl(*fn.pyramid));
      d.parents = {fn.name};
      d.diagonal_of = fn.pyramid;
      return d;
    }
    auto surf = fn.pyramid;
    Fn1 d;
    d.name = "diagonal(" + fn.name + ")";
    d.parents = {fn.name};
    d.domain = Interval(0.0, 1.0);
    d.diagonal_of = surf;
    d.f = [surf](double t) { return surf->eval(t, t); };
    return d;
  }
  auto fo = std::make_shared<const Fn2>(fn);
  Fn1 d;
  d.name = "diagonal(" + fn.name + ")";
  d.parents = {fn.name};
  d.domain = Interval(0.0, 1.0);
  d.f = [fo](double t) { return (*fo)(t, t); };
  return d;
}

}  // namespace cex
