#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cex/errors.hpp"
#include "cex/rational.hpp"
#include "cex/seq.hpp"

namespace cex {

/// One axis-aligned square of the construction, with exact coordinates.
struct PyramidSquare {
  Rational lo;      // a_{n,i}
  Rational hi;      // b_{n,i}
  Rational center;  // c_{n,i}
};

/// Per-level parameters of the pathology surface.
///
/// Level n lives over the band [2^-n, 2^-(n-1)], split into k_n squares of
/// side d_n = 1/(2^n k_n); each square carries a pyramid of height 1/(2 k_n).
struct PathologyLevel {
  int n = 0;
  std::int64_t k = 0;
  double u = 0.0;               // the sequence value driving this level
  Rational d;                   // exact side length
  double d_approx = 0.0;
  Rational peak;                // 1/(2k)
  Rational band_lo;             // 2^-n
  Rational band_hi;             // 2^-(n-1)

  PyramidSquare square(std::int64_t i) const {  // i in [1, k]
    if (i < 1 || i > k) throw ParameterError("square index out of range");
    Rational a = band_lo + Rational(i - 1) * d;
    Rational b = band_lo + Rational(i) * d;
    return PyramidSquare{a, b, (a + b) / Rational(2)};
  }

  /// k * d^2, the exact Lebesgue measure of this level's squares.
  Rational support_measure() const { return Rational::from128(Int128(k), 1) * d * d; }
};

/// The separately-Lipschitz surface with unbounded diagonal variation,
/// built to finite depth. Evaluation locates the unique square containing a
/// point arithmetically, so enormous per-level square counts are fine.
class PathologySurface {
 public:
  PathologySurface(SeqSpec u, int depth, std::vector<PathologyLevel> levels)
      : u_(std::move(u)), depth_(depth), levels_(std::move(levels)) {}

  const SeqSpec& u() const { return u_; }
  int depth() const { return depth_; }
  const std::vector<PathologyLevel>& levels() const { return levels_; }
  const PathologyLevel& level(int n) const {
    if (n < 1 || n > depth_) throw ParameterError("level out of range");
    return levels_[static_cast<std::size_t>(n - 1)];
  }

  /// f(x,y) on Q = [0,1]^2. Zero off the built squares.
  double eval(double x, double y) const {
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
      throw DomainError("pathology surface evaluated outside Q at (" + std::to_string(x) + ", " +
                        std::to_string(y) + ")");
    if (x <= 0.0 || y <= 0.0) return 0.0;
    int n = band_index(x);
    if (n < 1 || n > depth_) return 0.0;
    const PathologyLevel& lv = levels_[static_cast<std::size_t>(n - 1)];
    double band_lo = std::ldexp(1.0, -n);
    double rel = (x - band_lo) / lv.d_approx;
    auto i = static_cast<std::int64_t>(rel);  // 0-based square index
    if (i < 0) i = 0;
    if (i >= lv.k) i = lv.k - 1;
    double a = band_lo + static_cast<double>(i) * lv.d_approx;
    double b = a + lv.d_approx;
    if (y < a || y > b) return 0.0;  // not in the same square
    double c = 0.5 * (a + b);
    double m = std::max(std::fabs(x - c), std::fabs(y - c));
    double h = 0.5 / static_cast<double>(lv.k);
    double v = h * (1.0 - 2.0 * m / lv.d_approx);
    return v > 0.0 ? v : 0.0;
  }

  /// Largest per-level count over the built prefix; drives materialization.
  std::int64_t max_square_count() const {
    std::int64_t m = 0;
    for (const auto& lv : levels_) m = std::max(m, lv.k);
    return m;
  }

 private:
  SeqSpec u_;
  int depth_;
  std::vector<PathologyLevel> levels_;

  // Band n = [2^-n, 2^-(n-1)] containing x in (0,1]; boundary points fall to
  // the band where they sit at the left edge (value 0 either way).
  static int band_index(double x) {
    int e = 0;
    std::frexp(x, &e);  // x in [2^(e-1), 2^e)
    return 1 - e;
  }
};

namespace detail {

constexpr std::int64_t kMaxSquareIndex = std::int64_t(1) << 62;

inline std::int64_t pathology_count_for_level(const SeqSpec& u, int n) {
  // k_n = floor(1 / (4^n u_n)) + 1, exact where the sequence is exact.
  if (auto ue = u.exact_value(n)) {
    if (ue->sign() <= 0) throw DepthLimitError("sequence value vanished at level " + std::to_string(n), n - 1);
    Rational q = Rational(1) / (Rational::pow2(2 * n) * *ue);
    Int128 f = q.floor();
    if (f >= Int128(kMaxSquareIndex)) return -1;
    return static_cast<std::int64_t>(f) + 1;
  }
  double un = u.value(n);
  if (!(un > 0.0)) throw DepthLimitError("sequence value vanished at level " + std::to_string(n), n - 1);
  double q = 1.0 / (std::exp2(2.0 * n) * un);
  if (!(q < static_cast<double>(kMaxSquareIndex))) return -1;
  return static_cast<std::int64_t>(std::floor(q)) + 1;
}

}  // namespace detail

/// Largest depth at which every level's square count fits the index type.
inline int pathology_max_safe_depth(const SeqSpec& u, int probe_limit = 64) {
  for (int n = 1; n <= probe_limit; ++n) {
    std::int64_t k;
    try {
      k = detail::pathology_count_for_level(u, n);
    } catch (const DepthLimitError& e) {
      return e.max_safe;
    } catch (const ParameterError&) {
      return n - 1;  // explicit list exhausted
    }
    if (k < 0) return n - 1;
  }
  return probe_limit;
}

/// Build the surface to depth N. Throws DepthLimitError naming the maximal
/// safe depth when a level's square count would overflow the index type.
inline PathologySurface build_pathology(const SeqSpec& u, int depth) {
  if (depth < 1) throw ParameterError("pathology depth must be >= 1");
  std::vector<PathologyLevel> levels;
  levels.reserve(static_cast<std::size_t>(depth));
  for (int n = 1; n <= depth; ++n) {
    std::int64_t k;
    try {
      k = detail::pathology_count_for_level(u, n);
    } catch (const DepthLimitError& e) {
      throw DepthLimitError("level " + std::to_string(n) + " unavailable; maximal safe depth is " +
                                std::to_string(e.max_safe),
                            e.max_safe);
    }
    if (k < 0)
      throw DepthLimitError("square count overflows at level " + std::to_string(n) +
                                "; maximal safe depth is " + std::to_string(n - 1),
                            n - 1);
    PathologyLevel lv;
    lv.n = n;
    lv.k = k;
    lv.u = u.value(n);
    lv.d = Rational(1) / (Rational::pow2(n) * Rational::from128(Int128(k), 1));
    lv.d_approx = lv.d.to_double();
    lv.peak = Rational(1) / Rational::from128(Int128(2) * k, 1);
    lv.band_lo = Rational::pow2(-n);
    lv.band_hi = Rational::pow2(-(n - 1));
    levels.push_back(std::move(lv));
  }
  return PathologySurface(u, depth, std::move(levels));
}

}  // namespace cex
