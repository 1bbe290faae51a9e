#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cex/errors.hpp"
#include "cex/fn.hpp"
#include "cex/interval.hpp"
#include "cex/pathology.hpp"
#include "cex/seq.hpp"
#include "cex/special.hpp"
#include "cex/zigzag.hpp"

namespace cex {

// ---------------------------------------------------------------------------
// Gallery
// ---------------------------------------------------------------------------

/// f(x) = x ln x - x, the primitive of ln on [0,1]; f(0) = 0 by continuity.
/// Absolutely continuous but not Lipschitz: the derivative ln x is unbounded.
inline Fn1 make_xlnx() {
  Fn1 fn;
  fn.name = "xlnx";
  fn.domain = Interval(0.0, 1.0);
  fn.singular_left = true;
  fn.f = [](double x) { return x == 0.0 ? 0.0 : x * std::log(x) - x; };
  return fn;
}

/// |ln x| on (0,1]; +infinity at 0. Carries its analytic distribution
/// lambda(|ln x| >= a) = e^{-a} and the Gamma-function integrals.
inline Fn1 make_log_magnitude() {
  Fn1 fn;
  fn.name = "xlnx-derivative";
  fn.domain = Interval(0.0, 1.0);
  fn.singular_left = true;
  fn.f = [](double x) { return x == 0.0 ? HUGE_VAL : std::fabs(std::log(x)); };
  fn.analytic_distribution = [](double alpha) { return alpha <= 0.0 ? 1.0 : std::exp(-alpha); };
  fn.analytic_lp_integral = [](double p) { return std::tgamma(p + 1.0); };
  fn.lp_tail = [](double p, double eps) {
    return eps <= 0.0 ? 0.0 : upper_incomplete_gamma(p + 1.0, -std::log(eps));
  };
  return fn;
}

/// g(x) = x^2 sin^2(1/x) for x > 0 and 0 at x = 0. Lipschitz with |g'| <= 4.
inline Fn1 make_sine_square() {
  Fn1 fn;
  fn.name = "sine-square";
  fn.domain = Interval(0.0, 1.0);
  fn.f = [](double x) {
    if (x == 0.0) return 0.0;
    double s = std::sin(1.0 / x);
    return x * x * s * s;
  };
  fn.lipschitz_bound = 4.0;
  return fn;
}

inline Fn1 make_sqrt() {
  Fn1 fn;
  fn.name = "sqrt";
  fn.domain = Interval(0.0, 1.0);
  fn.f = [](double x) { return std::sqrt(x); };
  return fn;
}

inline Fn1 make_identity() {
  Fn1 fn;
  fn.name = "id";
  fn.domain = Interval(0.0, 1.0);
  fn.f = [](double x) { return x; };
  fn.lipschitz_bound = 1.0;
  return fn;
}

inline Fn1 make_constant(double c) {
  Fn1 fn;
  fn.name = "const:" + std::to_string(c);
  fn.domain = Interval(0.0, 1.0);
  fn.f = [c](double) { return c; };
  fn.lipschitz_bound = 0.0;
  return fn;
}

/// x |sin(1/x)|: the square root of sine-square, the classical superposition
/// with infinite variation near 0.
inline Fn1 make_sqrt_sine() {
  Fn1 fn = compose1(make_sqrt(), make_sine_square());
  fn.name = "sqrt-sine";
  return fn;
}

/// The Schwarz function 2xy/(x^2+y^2) with value 0 at the origin. Separately
/// absolutely continuous, with section Lipschitz constants 2/y on y > 0 lines,
/// but discontinuous along the diagonal.
inline Fn2 make_schwarz() {
  Fn2 fn;
  fn.name = "schwarz";
  fn.f = [](double x, double y) {
    double q = x * x + y * y;
    if (q == 0.0) return 0.0;
    return 2.0 * x * y / q;
  };
  return fn;
}

/// phi(x,y) = f(x): depends on y only formally.
inline Fn2 lift(const Fn1& inner) {
  auto fi = std::make_shared<const Fn1>(inner);
  Fn2 fn;
  fn.name = "lift(" + inner.name + ")";
  fn.parents = {inner.name};
  fn.lifted = fi;
  fn.f = [fi](double x, double) { return (*fi)(x); };
  return fn;
}

/// Wrap a built pathology surface as a two-variable descriptor.
inline Fn2 pathology_fn(PathologySurface surface) {
  auto s = std::make_shared<const PathologySurface>(std::move(surface));
  Fn2 fn;
  fn.name = "pathology(" + s->u().name() + ", depth=" + std::to_string(s->depth()) + ")";
  fn.pyramid = s;
  fn.f = [s](double x, double y) { return s->eval(x, y); };
  return fn;
}

/// Wrap a built zigzag map (scalar codomain) as a one-variable descriptor.
inline Fn1 zigzag_fn(ZigzagMap map) {
  if (map.dim() != 1) throw MethodError("zigzag_fn needs a scalar-codomain map");
  auto m = std::make_shared<const ZigzagMap>(std::move(map));
  Fn1 fn;
  fn.name = "zigzag(depth=" + std::to_string(m->depth()) + ")";
  fn.domain = Interval(0.0, m->domain_end());
  fn.zigzag = m;
  fn.lipschitz_bound = 1.0;
  fn.f = [m](double t) { return m->eval1(t); };
  return fn;
}

/// Coordinate function of a planar zigzag map.
inline Fn1 zigzag_coordinate_fn(std::shared_ptr<const ZigzagMap> m, int coord) {
  if (coord < 0 || coord >= m->dim()) throw ParameterError("zigzag coordinate out of range");
  Fn1 fn;
  fn.name = "zigzag-coord" + std::to_string(coord) + "(depth=" + std::to_string(m->depth()) + ")";
  fn.domain = Interval(0.0, m->domain_end());
  fn.zigzag = m;
  fn.lipschitz_bound = 1.0;
  fn.f = [m, coord](double t) {
    Point p = m->eval(t);
    return coord == 0 ? p.x : p.y;
  };
  return fn;
}

using GalleryItem = std::variant<Fn1, Fn2>;

struct GalleryEntry {
  std::string name;
  int arity;
  std::string domain;
  std::string note;
};

inline std::vector<GalleryEntry> gallery_catalog() {
  return {
      {"schwarz", 2, "Q = [0,1]^2",
       "2xy/(x^2+y^2), 0 at the origin; separately absolutely continuous, discontinuous on the diagonal"},
      {"sine-square", 1, "[0,1]", "x^2 sin^2(1/x); Lipschitz with constant at most 4"},
      {"sqrt", 1, "[0,1]", "x^(1/2); absolutely continuous, not Lipschitz at 0"},
      {"xlnx", 1, "[0,1]", "x ln x - x, the primitive of ln; absolutely continuous with unbounded derivative"},
      {"id", 1, "[0,1]", "identity"},
      {"const:<c>", 1, "[0,1]", "constant function"},
      {"lift:<f>", 2, "Q = [0,1]^2", "phi(x,y) = f(x)"},
  };
}

/// Named gallery lookup. `const:<c>` and `lift:<f>` take parameters.
inline GalleryItem gallery(const std::string& name) {
  if (name == "schwarz") return make_schwarz();
  if (name == "sine-square") return make_sine_square();
  if (name == "sqrt") return make_sqrt();
  if (name == "xlnx") return make_xlnx();
  if (name == "id") return make_identity();
  if (name.rfind("const:", 0) == 0) {
    try {
      return make_constant(std::stod(name.substr(6)));
    } catch (const std::exception&) {
      throw CatalogError("bad constant in gallery name '" + name + "'");
    }
  }
  if (name.rfind("lift:", 0) == 0) {
    GalleryItem inner = gallery(name.substr(5));
    if (!std::holds_alternative<Fn1>(inner))
      throw CatalogError("lift needs a one-variable gallery item in '" + name + "'");
    return lift(std::get<Fn1>(inner));
  }
  throw CatalogError("unknown gallery item '" + name + "'");
}

// ---------------------------------------------------------------------------
// Rademacher / Schauder system
// ---------------------------------------------------------------------------

/// r_n: the ±1 step function with cells [j/2^n, (j+1)/2^n), sign by parity of
/// j. Realized combinatorially so cells and values are exact.
inline Fn1 rademacher(int n) {
  if (n < 1) throw ParameterError("rademacher index must be >= 1");
  if (n > 40) throw ParameterError("rademacher index too deep to materialize");
  std::int64_t cells = std::int64_t(1) << n;
  std::vector<Rational> cuts, vals;
  cuts.reserve(static_cast<std::size_t>(cells) + 1);
  vals.reserve(static_cast<std::size_t>(cells));
  for (std::int64_t j = 0; j <= cells; ++j) cuts.push_back(Rational::from128(Int128(j), Int128(cells)));
  for (std::int64_t j = 0; j < cells; ++j) vals.emplace_back((j % 2 == 0) ? 1 : -1);
  auto step = std::make_shared<const StepFunction>(std::move(cuts), std::move(vals));
  Fn1 fn;
  fn.name = "rademacher:" + std::to_string(n);
  fn.domain = Interval(0.0, 1.0);
  fn.step = step;
  int shift = n;
  fn.f = [shift](double x) {
    double scaled = std::ldexp(x, shift);
    auto j = static_cast<std::int64_t>(scaled);
    if (j >= (std::int64_t(1) << shift)) j = (std::int64_t(1) << shift) - 1;  // x == 1
    return (j % 2 == 0) ? 1.0 : -1.0;
  };
  return fn;
}

/// f_n(x) = int_0^x r_n: the sawtooth with slopes ±1 and breakpoints j/2^n.
inline Fn1 schauder(int n) {
  if (n < 1) throw ParameterError("schauder index must be >= 1");
  if (n > 40) throw ParameterError("schauder index too deep to materialize");
  std::int64_t cells = std::int64_t(1) << n;
  std::vector<Rational> xs, ys;
  xs.reserve(static_cast<std::size_t>(cells) + 1);
  ys.reserve(static_cast<std::size_t>(cells) + 1);
  Rational cell = Rational::pow2(-n);
  Rational v;
  for (std::int64_t j = 0; j <= cells; ++j) {
    xs.push_back(Rational::from128(Int128(j), Int128(cells)));
    ys.push_back(v);
    if (j < cells) v += (j % 2 == 0) ? cell : -cell;
  }
  Fn1 fn = from_piecewise_linear("schauder:" + std::to_string(n), PiecewiseLinear(std::move(xs), std::move(ys)));
  fn.lipschitz_bound = 1.0;
  return fn;
}

/// Exact pointwise difference r_n - r_m as a step function.
inline StepFunction rademacher_difference(int n, int m) {
  Fn1 a = rademacher(n), b = rademacher(m);
  return *a.step - *b.step;
}

// ---------------------------------------------------------------------------
// Witness search
// ---------------------------------------------------------------------------

struct WitnessSearchConfig {
  int grid = 4096;       // grid for estimating max |f|
  double base = 0.0;     // probe scales base^-m; 0 picks a default per function
  int y_ladder = 4;      // candidate mates y = x * (1 + 2^-j), j = 0 .. y_ladder-1
};

/// Find pairs (x_n, y_n) near the left-end singularity of f with
/// |f(x_n)-f(y_n)| / d_n >= 2 n^3 * max|f|, accumulating toward the
/// singularity. Throws WitnessError when the budget is exhausted, which is
/// the expected outcome for Lipschitz inputs.
inline WitnessSeq find_witnesses(const Fn1& fn, const Interval& iv, int count, int budget,
                                 WitnessSearchConfig cfg = {}) {
  if (count < 1) throw ParameterError("witness count must be >= 1");
  if (budget < 1) throw ParameterError("witness budget must be >= 1");
  double base = cfg.base;
  if (base <= 1.0) base = (fn.name == "xlnx") ? std::exp(1.0) : 2.0;

  // grid estimate of max |f| over the compact interval
  double maxf = 0.0;
  for (int i = 0; i <= cfg.grid; ++i) {
    double x = iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / cfg.grid;
    double v = std::fabs(fn(x));
    if (std::isfinite(v) && v > maxf) maxf = v;
  }
  if (maxf == 0.0) throw WitnessError("function vanishes on the sampling grid; no quotient bound to beat");

  WitnessSeq w;
  w.max_abs = maxf;
  int m = 0;
  for (int n = 1; n <= count; ++n) {
    double target = 2.0 * std::pow(static_cast<double>(n), 3.0) * maxf;
    bool found = false;
    while (++m <= budget) {
      double x = std::pow(base, -static_cast<double>(m));
      if (x < iv.lo || x <= 4.9406564584124654e-324) break;
      // mates above x first (x * (1 + 2^-j)), then the left endpoint
      for (int j = 0; j <= cfg.y_ladder && !found; ++j) {
        double y = (j < cfg.y_ladder) ? x * (1.0 + std::ldexp(1.0, -j)) : iv.lo;
        if (y > iv.hi || y == x) continue;
        double q = std::fabs(fn(x) - fn(y)) / std::fabs(x - y);
        if (std::isfinite(q) && q >= target) {
          w.xs.push_back(Point::real(x));
          w.ys.push_back(Point::real(y));
          w.d.push_back(std::fabs(x - y));
          w.quotient.push_back(q);
          found = true;
        }
      }
      if (found) break;
    }
    if (!found)
      throw WitnessError("no witness pair with quotient >= " + std::to_string(target) + " for level " +
                         std::to_string(n) + " within budget " + std::to_string(budget) +
                         "; the function may be Lipschitz at the probed scales");
  }
  return w;
}

/// Exact variation of f(g(.)) over the n-th zigzag segment [a_n, b_n]:
/// the composition alternates between f(x_n) and f(y_n) across 2 k_n pieces.
inline double zigzag_composition_variation(const Fn1& fn, const ZigzagMap& map, int n) {
  const ZigzagLevel& lv = map.level(n);
  if (map.dim() != 1) throw MethodError("scalar outer function over a planar zigzag map");
  double df = std::fabs(fn(lv.x.x) - fn(lv.y.x));
  return 2.0 * lv.k * df;
}

/// Same, with a two-variable outer function evaluated at the planar points.
inline double zigzag_composition_variation(const Fn2& fn, const ZigzagMap& map, int n) {
  const ZigzagLevel& lv = map.level(n);
  auto at = [&](const Point& p) { return map.dim() == 1 ? fn(p.x, p.x) : fn(p.x, p.y); };
  return 2.0 * lv.k * std::fabs(at(lv.x) - at(lv.y));
}

}  // namespace cex
