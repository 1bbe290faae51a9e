#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace cex {

/// Trigamma: sum_{k>=0} 1/(z+k)^2, used for exact-ish tails of 1/n^2 families.
/// Recurrence shift into the asymptotic regime, then a Bernoulli expansion.
inline double trigamma(double z) {
  double acc = 0.0;
  while (z < 30.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  double inv = 1.0 / z;
  double inv2 = inv * inv;
  // 1/z + 1/(2z^2) + 1/(6z^3) - 1/(30z^5) + 1/(42z^7) - 1/(30z^9)
  double series = inv + 0.5 * inv2 + inv2 * inv * (1.0 / 6.0) - inv2 * inv2 * inv * (1.0 / 30.0) +
                  inv2 * inv2 * inv2 * inv * (1.0 / 42.0) - inv2 * inv2 * inv2 * inv2 * inv * (1.0 / 30.0);
  return acc + series;
}

/// Upper incomplete gamma Gamma(a, x) for x > a+1, by the standard continued
/// fraction (modified Lentz). Covers the analytic quadrature tails
/// int_0^eps |ln t|^(a-1)-style pieces, where x = -ln(eps) is large.
inline double upper_incomplete_gamma(double a, double x) {
  if (x <= 0.0) return std::tgamma(a);
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 400; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x)) * h;
}

/// Deterministic uniform generator: a fixed-seed xorshift-based stream so
/// reports are reproducible across standard libraries and platforms.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t kDefaultSeed = 0x5EED;

}  // namespace cex
