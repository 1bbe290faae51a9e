#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cex/errors.hpp"

namespace cex {

/// Point in the codomain of the zigzag map: a real, or a point of the plane.
struct Point {
  double x = 0.0;
  double y = 0.0;
  int dim = 1;

  static Point real(double v) { return Point{v, 0.0, 1}; }
  static Point plane(double px, double py) { return Point{px, py, 2}; }

  friend double distance(const Point& a, const Point& b) {
    if (a.dim == 1) return std::fabs(a.x - b.x);
    return std::hypot(a.x - b.x, a.y - b.y);
  }
};

/// Pairs (x_n, y_n) whose difference quotients certify a Lipschitz failure.
struct WitnessSeq {
  std::vector<Point> xs;
  std::vector<Point> ys;
  std::vector<double> d;         // distance per pair
  std::vector<double> quotient;  // achieved |f(x_n)-f(y_n)| / d_n
  double max_abs = 0.0;          // grid estimate of max |f| used for the bound

  std::size_t size() const { return xs.size(); }
};

struct ZigzagLevel {
  Point x, y;
  double d = 0.0;      // |x - y|
  double k = 0.0;      // floor(1/(n^2 d)); stored as double, see k_exact
  bool k_exact = true; // false when 1/(n^2 d) exceeds 2^53 and the floor is nominal
  double a = 0.0;      // segment start
  double b = 0.0;      // segment end: a + 2 k d
};

/// The 1-Lipschitz piecewise-linear map oscillating between witness points.
///
/// g(a_n + 2 i d_n) = x_n and g(a_n + (2i-1) d_n) = y_n on each level, linear
/// in between and on the bridges [b_n, a_{n+1}]. For levels whose phase is not
/// resolvable in double precision (k_n beyond 2^53), evaluation returns x_n,
/// which is within d_n of the true value.
class ZigzagMap {
 public:
  explicit ZigzagMap(std::vector<ZigzagLevel> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw ParameterError("zigzag map needs at least one level");
    dim_ = levels_.front().x.dim;
  }

  const std::vector<ZigzagLevel>& levels() const { return levels_; }
  const ZigzagLevel& level(int n) const {
    if (n < 1 || n > static_cast<int>(levels_.size())) throw ParameterError("zigzag level out of range");
    return levels_[static_cast<std::size_t>(n - 1)];
  }
  int depth() const { return static_cast<int>(levels_.size()); }
  int dim() const { return dim_; }
  double domain_end() const { return levels_.back().b; }

  Point eval(double t) const {
    if (!(t >= 0.0 && t <= domain_end() * (1.0 + 1e-15) + 1e-300))
      throw DomainError("zigzag map evaluated outside [0, b] at t = " + std::to_string(t));
    // locate level or bridge
    std::size_t lo = 0, hi = levels_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (t <= levels_[mid].b)
        hi = mid;
      else
        lo = mid + 1;
    }
    const ZigzagLevel& lv = levels_[lo];
    if (t < lv.a) {
      // bridge from the previous level's end toward this level's x
      const ZigzagLevel& prev = levels_[lo - 1];
      double len = lv.a - prev.b;
      if (len <= 0.0) return lv.x;
      double f = (t - prev.b) / len;
      return lerp(prev.x, lv.x, f);
    }
    double phase = (t - lv.a) / lv.d;
    if (!(phase < 9.007199254740992e15))  // 2^53: pieces no longer resolvable
      return lv.x;
    double j = std::floor(phase);
    double frac = phase - j;
    if (j >= 2.0 * lv.k) return lv.x;  // t == b exactly
    bool even = std::fmod(j, 2.0) == 0.0;
    const Point& v0 = even ? lv.x : lv.y;
    const Point& v1 = even ? lv.y : lv.x;
    return lerp(v0, v1, frac);
  }

  double eval1(double t) const {
    if (dim_ != 1) throw MethodError("scalar evaluation of a planar zigzag map");
    return eval(t).x;
  }

 private:
  std::vector<ZigzagLevel> levels_;
  int dim_ = 1;

  static Point lerp(const Point& a, const Point& b, double f) {
    Point p;
    p.dim = a.dim;
    p.x = a.x + (b.x - a.x) * f;
    p.y = a.y + (b.y - a.y) * f;
    return p;
  }
};

/// Assemble the map from the first N witness pairs.
/// k_n = floor(1/(n^2 d_n)) must be >= 1, i.e. d_n <= 1/n^2; pairs violating
/// this (or with d_n = 0) are rejected.
inline ZigzagMap build_zigzag(const WitnessSeq& w, int depth) {
  if (depth < 1 || depth > static_cast<int>(w.size()))
    throw ParameterError("zigzag depth must be in [1, witness count]");
  std::vector<ZigzagLevel> levels;
  levels.reserve(static_cast<std::size_t>(depth));
  double a = 0.0;
  for (int n = 1; n <= depth; ++n) {
    const Point& xn = w.xs[static_cast<std::size_t>(n - 1)];
    const Point& yn = w.ys[static_cast<std::size_t>(n - 1)];
    double d = distance(xn, yn);
    if (d == 0.0) throw WitnessError("degenerate witness pair at level " + std::to_string(n));
    double kq = 1.0 / (static_cast<double>(n) * n * d);
    if (kq < 1.0)
      throw WitnessError("witness distance " + std::to_string(d) + " too large at level " +
                         std::to_string(n) + " (needs d <= 1/n^2)");
    ZigzagLevel lv;
    lv.x = xn;
    lv.y = yn;
    lv.d = d;
    lv.k_exact = kq <= 9.007199254740992e15;
    lv.k = lv.k_exact ? std::floor(kq) : kq;
    lv.a = a;
    lv.b = a + 2.0 * lv.k * d;
    levels.push_back(lv);
    if (n < depth) a = lv.b + distance(xn, w.xs[static_cast<std::size_t>(n)]);
  }
  return ZigzagMap(std::move(levels));
}

}  // namespace cex
