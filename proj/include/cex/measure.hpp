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
#include "cex/fn.hpp"
#include "cex/pathology.hpp"
#include "cex/quadrature.hpp"
#include "cex/rational.hpp"

namespace cex {

// ---------------------------------------------------------------------------
// Derivative fields of pyramid-sum surfaces
// ---------------------------------------------------------------------------

/// On each square the partial derivative along one axis is +-2^n on the two
/// triangles where that axis dominates (total measure d_n^2 / 2 per square)
/// and 0 elsewhere. Squares within a level are identical, so the field is
/// stored per level.
struct DerivativePiece {
  int n = 0;
  double value = 0.0;   // 2^n  (= 1/(d_n k_n))
  Rational measure;     // k_n d_n^2 / 2, the axis-dominant halves of the level
};

struct DerivativeField {
  Axis axis = Axis::X;
  std::shared_ptr<const PathologySurface> source;
  std::vector<DerivativePiece> pieces;

  /// Exact lambda({ |field| >= alpha }) for alpha > 0; domain measure 1 at 0.
  Rational distribution_exact(double alpha) const {
    if (alpha <= 0.0) return Rational(1);
    Rational total;
    for (const auto& p : pieces)
      if (p.value >= alpha) total += p.measure;
    return total;
  }

  /// Exact layer-cake integral sum |value|^p * measure(value).
  double lp_integral(double p) const {
    double total = 0.0;
    for (const auto& piece : pieces) total += std::pow(piece.value, p) * piece.measure.to_double();
    return total;
  }
};

inline DerivativeField derivative_field(std::shared_ptr<const PathologySurface> surface, Axis axis) {
  DerivativeField f;
  f.axis = axis;
  f.source = surface;
  for (const auto& lv : surface->levels()) {
    DerivativePiece p;
    p.n = lv.n;
    p.value = std::ldexp(1.0, lv.n);
    p.measure = lv.support_measure() / Rational(2);
    f.pieces.push_back(std::move(p));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Distribution functions
// ---------------------------------------------------------------------------

enum class DistMethod { Exact, Grid };

struct GridDistribution {
  double value = 0.0;
  std::int64_t boundary_cells = 0;
  double cell_measure = 0.0;  // measure of one grid cell
  double error_bar() const { return static_cast<double>(boundary_cells) * cell_measure; }
};

/// Midpoint-classified grid measure of {|f| >= alpha} on the domain interval.
/// Cells whose endpoint classification disagrees with the midpoint are
/// counted separately as the first-order error bar.
inline GridDistribution distribution_grid(const Fn1& fn, double alpha, std::int64_t cells) {
  if (cells < 2) throw ParameterError("grid distribution needs >= 2 cells");
  GridDistribution g;
  double len = fn.domain.length();
  double h = len / static_cast<double>(cells);
  g.cell_measure = h;
  std::int64_t inside = 0;
  double prev_end = std::fabs(fn(fn.domain.lo + 0.5 * h / 8.0));  // stay off a singular lo endpoint
  for (std::int64_t i = 0; i < cells; ++i) {
    double mid = fn.domain.lo + (static_cast<double>(i) + 0.5) * h;
    double end = fn.domain.lo + static_cast<double>(i + 1) * h;
    if (i + 1 == cells) end = fn.domain.hi;
    bool c_mid = std::fabs(fn(mid)) >= alpha;
    bool c_lo = prev_end >= alpha;
    double v_end = std::fabs(fn(end));
    bool c_hi = v_end >= alpha;
    if (c_mid) ++inside;
    if (c_lo != c_mid || c_hi != c_mid) ++g.boundary_cells;
    prev_end = v_end;
  }
  g.value = static_cast<double>(inside) * h;
  return g;
}

inline GridDistribution distribution_grid(const Fn2& fn, double alpha, std::int64_t cells_per_axis) {
  if (cells_per_axis < 2) throw ParameterError("grid distribution needs >= 2 cells per axis");
  GridDistribution g;
  double h = 1.0 / static_cast<double>(cells_per_axis);
  g.cell_measure = h * h;
  std::int64_t inside = 0;
  for (std::int64_t i = 0; i < cells_per_axis; ++i) {
    double x = (static_cast<double>(i) + 0.5) * h;
    for (std::int64_t j = 0; j < cells_per_axis; ++j) {
      double y = (static_cast<double>(j) + 0.5) * h;
      bool c_mid = std::fabs(fn(x, y)) >= alpha;
      if (c_mid) ++inside;
      bool boundary = false;
      for (int cx = 0; cx <= 1 && !boundary; ++cx)
        for (int cy = 0; cy <= 1 && !boundary; ++cy) {
          double vx = (static_cast<double>(i) + cx) * h;
          double vy = (static_cast<double>(j) + cy) * h;
          if ((std::fabs(fn(vx, vy)) >= alpha) != c_mid) boundary = true;
        }
      if (boundary) ++g.boundary_cells;
    }
  }
  g.value = static_cast<double>(inside) * g.cell_measure;
  return g;
}

/// lambda({|target| >= alpha}). Exact requires an exact or analytic
/// representation (piecewise linear, step, derivative field, or a descriptor
/// carrying its distribution in closed form).
inline double distribution(const Fn1& fn, double alpha, DistMethod method, std::int64_t grid = 4096) {
  if (alpha < 0.0) throw ParameterError("distribution needs alpha >= 0");
  if (method == DistMethod::Exact) {
    if (alpha == 0.0) return fn.domain.length();
    if (fn.exact) return fn.exact->distribution_exact(Rational::from_double(alpha)).to_double();
    if (fn.step) return fn.step->distribution_exact(Rational::from_double(alpha)).to_double();
    if (fn.analytic_distribution) return fn.analytic_distribution(alpha);
    throw MethodError("exact distribution requested for '" + fn.name + "', which has no exact representation");
  }
  return distribution_grid(fn, alpha, grid).value;
}

inline double distribution(const Fn2& fn, double alpha, DistMethod method, std::int64_t grid = 2048) {
  if (alpha < 0.0) throw ParameterError("distribution needs alpha >= 0");
  if (method == DistMethod::Exact) {
    if (alpha == 0.0) return 1.0;
    if (fn.lifted) return distribution(*fn.lifted, alpha, DistMethod::Exact);
    if (fn.pyramid) {
      // |f| >= alpha inside a level-n square is the centered sub-square where
      // the pyramid exceeds alpha: side d_n (1 - 2 alpha k_n) when positive.
      Rational total;
      for (const auto& lv : fn.pyramid->levels()) {
        double peak = lv.peak.to_double();
        if (peak < alpha) continue;
        Rational a = Rational::from_double(alpha);
        Rational side = lv.d * (Rational(1) - a * Rational(2) * Rational::from128(Int128(lv.k), 1));
        if (side.sign() <= 0) continue;
        total += Rational::from128(Int128(lv.k), 1) * side * side;
      }
      return total.to_double();
    }
    throw MethodError("exact distribution requested for '" + fn.name + "', which has no exact representation");
  }
  return distribution_grid(fn, alpha, grid).value;
}

inline double distribution(const DerivativeField& field, double alpha) {
  return field.distribution_exact(alpha).to_double();
}

// ---------------------------------------------------------------------------
// L^p norms
// ---------------------------------------------------------------------------

enum class LpMethod { LayerCake, Quadrature, Auto };

struct LpResult {
  double p = 1.0;
  double integral = 0.0;  // int |f|^p
  double norm = 0.0;      // (int |f|^p)^(1/p)
  bool exact = false;
  bool converged = true;
  bool divergence_suspected = false;
  std::string method;
};

inline LpResult lp_norm(const DerivativeField& field, double p) {
  if (p < 1.0) throw ParameterError("lp_norm needs p >= 1");
  LpResult r;
  r.p = p;
  r.integral = field.lp_integral(p);
  r.norm = std::pow(r.integral, 1.0 / p);
  r.exact = true;
  r.method = "layercake";
  return r;
}

inline LpResult lp_norm(const StepFunction& step, double p) {
  if (p < 1.0) throw ParameterError("lp_norm needs p >= 1");
  LpResult r;
  r.p = p;
  double rounded = std::round(p);
  if (rounded == p && p <= 16.0) {
    r.integral = step.lp_integral_exact(static_cast<int>(rounded)).to_double();
    r.exact = true;
  } else {
    const auto& cuts = step.cuts();
    const auto& vals = step.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
      sum += std::pow(vals[i].abs().to_double(), p) * (cuts[i + 1] - cuts[i]).to_double();
    r.integral = sum;
  }
  r.norm = std::pow(r.integral, 1.0 / p);
  r.method = "layercake";
  return r;
}

/// int |f|^p over the domain interval. Singular-left descriptors integrate on
/// [lo + 2^-60, hi] and add their analytic tail when they carry one.
inline LpResult lp_norm(const Fn1& fn, double p, LpMethod method = LpMethod::Auto, double tol = 1e-10) {
  if (p < 1.0) throw ParameterError("lp_norm needs p >= 1");
  LpResult r;
  r.p = p;
  if (method == LpMethod::LayerCake || method == LpMethod::Auto) {
    if (fn.step) return lp_norm(*fn.step, p);
    if (fn.analytic_lp_integral && method == LpMethod::Auto) {
      r.integral = fn.analytic_lp_integral(p);
      r.norm = std::pow(r.integral, 1.0 / p);
      r.exact = true;
      r.method = "analytic";
      return r;
    }
    if (method == LpMethod::LayerCake)
      throw MethodError("layer-cake norm requested for '" + fn.name + "', which is not piecewise constant");
  }
  auto integrand = [&fn, p](double x) { return std::pow(std::fabs(fn(x)), p); };
  if (!fn.singular_left) {
    IntegralResult integral = integrate_adaptive(integrand, fn.domain.lo, fn.domain.hi, tol);
    r.integral = integral.value;
    r.norm = std::pow(r.integral, 1.0 / p);
    r.converged = integral.converged;
    r.divergence_suspected = !integral.converged;
    r.method = "quadrature";
    return r;
  }
  // Graded dyadic blocks down to lo + 2^-60, then the analytic tail when the
  // descriptor carries one. For an integrable singularity the block
  // contributions must decay toward the endpoint; stalling or growth is the
  // divergence signature.
  const int kBlocks = 60;
  double span = fn.domain.length();
  double sum = 0.0;
  bool all_converged = true;
  double prev_block = -1.0;
  int non_decaying = 0;
  for (int j = 0; j < kBlocks; ++j) {
    double hi = fn.domain.lo + span * std::ldexp(1.0, -j);
    double lo = fn.domain.lo + span * std::ldexp(1.0, -(j + 1));
    IntegralResult block = integrate_adaptive(integrand, lo, hi, tol / kBlocks, 200000);
    sum += block.value;
    all_converged = all_converged && block.converged;
    if (prev_block >= 0.0 && std::fabs(block.value) >= 0.9 * std::fabs(prev_block) &&
        std::fabs(block.value) > tol)
      ++non_decaying;
    prev_block = block.value;
  }
  double tail = fn.lp_tail ? fn.lp_tail(p, span * std::ldexp(1.0, -kBlocks)) : 0.0;
  r.integral = sum + tail;
  r.norm = std::pow(r.integral, 1.0 / p);
  r.divergence_suspected = !fn.lp_tail && non_decaying >= kBlocks / 2;
  r.converged = all_converged && !r.divergence_suspected;
  r.method = "quadrature";
  return r;
}

inline LpResult lp_norm(const Fn2& fn, double p, LpMethod method = LpMethod::Auto, double tol = 1e-7) {
  if (p < 1.0) throw ParameterError("lp_norm needs p >= 1");
  if (fn.lifted) return lp_norm(*fn.lifted, p, method, tol);  // phi(x,y) = f(x) on the product
  LpResult r;
  r.p = p;
  IntegralResult integral = integrate_square_midpoint(
      [&fn, p](double x, double y) { return std::pow(std::fabs(fn(x, y)), p); }, tol);
  r.integral = integral.value;
  r.norm = std::pow(r.integral, 1.0 / p);
  r.converged = integral.converged;
  r.divergence_suspected = !integral.converged;
  r.method = "quadrature";
  return r;
}

// ---------------------------------------------------------------------------
// Dominance (rearrangement-invariant comparison, L^p instantiation)
// ---------------------------------------------------------------------------

/// Uniform handle over the targets dominance_check accepts.
struct Measurable {
  std::string name;
  std::function<double(double)> dist;      // alpha -> lambda(|f| >= alpha)
  std::function<LpResult(double)> lp;      // p -> norm record
};

inline Measurable make_measurable(const DerivativeField& field) {
  return Measurable{
      std::string(field.axis == Axis::X ? "f'x" : "f'y") + "(pathology)",
      [field](double alpha) { return distribution(field, alpha); },
      [field](double p) { return lp_norm(field, p); },
  };
}

inline Measurable make_measurable(const Fn1& fn, DistMethod dm = DistMethod::Exact) {
  return Measurable{
      fn.name,
      [fn, dm](double alpha) { return distribution(fn, alpha, dm); },
      [fn](double p) { return lp_norm(fn, p); },
  };
}

inline Measurable make_measurable(const Fn2& fn, DistMethod dm = DistMethod::Exact) {
  return Measurable{
      fn.name,
      [fn, dm](double alpha) { return distribution(fn, alpha, dm); },
      [fn](double p) { return lp_norm(fn, p); },
  };
}

struct DominanceRow {
  double at = 0.0;  // alpha or p
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct DominanceReport {
  std::string f_name, g_name;
  std::vector<DominanceRow> distribution_rows;
  std::vector<DominanceRow> norm_rows;
  double tolerance = 0.0;
  bool overall = true;
};

/// Verifies lambda(|f| >= alpha) <= lambda(|g| >= alpha) at each alpha, then
/// ||f||_p <= ||g||_p at each p. Any violating alpha or p is reported.
inline DominanceReport dominance_check(const Measurable& f, const Measurable& g,
                                       const std::vector<double>& alphas, const std::vector<double>& ps,
                                       double tol = 1e-12) {
  DominanceReport rep;
  rep.f_name = f.name;
  rep.g_name = g.name;
  rep.tolerance = tol;
  for (double a : alphas) {
    DominanceRow row;
    row.at = a;
    row.lhs = f.dist(a);
    row.rhs = g.dist(a);
    row.pass = row.lhs <= row.rhs + tol;
    rep.overall = rep.overall && row.pass;
    rep.distribution_rows.push_back(row);
  }
  for (double p : ps) {
    DominanceRow row;
    row.at = p;
    row.lhs = f.lp(p).norm;
    row.rhs = g.lp(p).norm;
    row.pass = row.lhs <= row.rhs + tol;
    rep.overall = rep.overall && row.pass;
    rep.norm_rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Measure bound verification for built surfaces
// ---------------------------------------------------------------------------

struct MeasureCheck {
  std::string id;
  int n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool exact = false;  // both sides compared in exact arithmetic
  bool pass = false;
};

struct MeasureReport {
  std::vector<MeasureCheck> checks;
  double tolerance = 1e-12;
  bool overall = true;
};

/// Checks, with exact piece arithmetic on the left-hand sides:
///   support:  sum_n k_n d_n^2            <= sum_{k>=1} u_k
///   dx.n:     lambda(|f'_x| >= 2^n)      <= sum_{k>=n} u_k   (n = 1..depth)
///   dy.n:     lambda(|f'_y| >= 2^n)      <= sum_{k>=n} u_k
/// Right-hand tails are closed-form exact where the family permits.
inline MeasureReport verify_bounds(const PathologySurface& surface) {
  MeasureReport rep;
  auto shared = std::make_shared<const PathologySurface>(surface);
  DerivativeField fx = derivative_field(shared, Axis::X);
  DerivativeField fy = derivative_field(shared, Axis::Y);
  const SeqSpec& u = surface.u();

  auto add_check = [&rep](std::string id, int n, const Rational& lhs, std::optional<Rational> rhs_exact,
                          double rhs) {
    MeasureCheck c;
    c.id = std::move(id);
    c.n = n;
    c.lhs = lhs.to_double();
    if (rhs_exact) {
      c.rhs = rhs_exact->to_double();
      c.exact = true;
      c.pass = lhs <= *rhs_exact;
    } else {
      c.rhs = rhs;
      c.pass = c.lhs <= rhs + rep.tolerance;
    }
    rep.overall = rep.overall && c.pass;
    rep.checks.push_back(std::move(c));
  };

  Rational support;
  for (const auto& lv : surface.levels()) support += lv.support_measure();
  add_check("support", 0, support, u.exact_tail(1), u.tail(1));

  for (int n = 1; n <= surface.depth(); ++n) {
    double alpha = std::ldexp(1.0, n);
    add_check("dx.n=" + std::to_string(n), n, fx.distribution_exact(alpha), u.exact_tail(n), u.tail(n));
    add_check("dy.n=" + std::to_string(n), n, fy.distribution_exact(alpha), u.exact_tail(n), u.tail(n));
  }
  return rep;
}

}  // namespace cex
