#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include "cex/errors.hpp"

namespace cex {

using Int128 = __int128;

inline std::string int128_to_string(Int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

/// Exact rational with 128-bit numerator and denominator.
///
/// This is the coordinate type for every exact breakpoint in the library:
/// dyadic rationals m*2^e are the common case, but pyramid grids need
/// denominators 2^n*k_n, so the general form is kept. All operations throw
/// ArithmeticOverflow instead of silently wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
  static Rational from128(Int128 n, Int128 d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
  }

  /// 2^e as an exact rational, |e| <= 126.
  static Rational pow2(int e) {
    if (e < -126 || e > 126) throw ArithmeticOverflow("Rational::pow2 exponent out of range");
    Rational r;
    if (e >= 0) {
      r.num_ = Int128(1) << e;
      r.den_ = 1;
    } else {
      r.num_ = 1;
      r.den_ = Int128(1) << (-e);
    }
    return r;
  }

  /// Exact conversion of a double (doubles are dyadic rationals).
  /// Throws if the binary exponent is outside what 128 bits can hold.
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw ParameterError("cannot convert non-finite double to Rational");
    if (x == 0.0) return Rational();
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
    auto mant = static_cast<long long>(std::ldexp(m, 53));
    int shift = e - 53;
    if (shift > 70 || shift < -120) throw ArithmeticOverflow("double exponent out of exact range");
    Rational r(mant);
    return shift >= 0 ? r * pow2(shift) : r / pow2(-shift);
  }

  Int128 num() const { return num_; }
  Int128 den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    // Reduce by gcd(da, db) first to keep intermediates small.
    Int128 g = gcd128(a.den_, b.den_);
    Int128 da = a.den_ / g;
    Int128 db = b.den_ / g;
    Int128 n = checked_add(checked_mul(a.num_, db), checked_mul(b.num_, da));
    Int128 d = checked_mul(a.den_, db);
    return from128(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Int128 g1 = gcd128(a.num_ < 0 ? -a.num_ : a.num_, b.den_);
    Int128 g2 = gcd128(b.num_ < 0 ? -b.num_ : b.num_, a.den_);
    Int128 n = checked_mul(a.num_ / g1, b.num_ / g2);
    Int128 d = checked_mul(a.den_ / g2, b.den_ / g1);
    return from128(n, d);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw ParameterError("Rational division by zero");
    Rational inv;
    inv.num_ = b.den_;
    inv.den_ = b.num_;
    if (inv.den_ < 0) {
      inv.num_ = -inv.num_;
      inv.den_ = -inv.den_;
    }
    return a * inv;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;  // both normalized
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

  /// Floor toward negative infinity.
  Int128 floor() const {
    Int128 q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) q -= 1;
    return q;
  }

  double to_double() const {
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
  }

  std::string str() const {
    if (den_ == 1) return int128_to_string(num_);
    return int128_to_string(num_) + "/" + int128_to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  Int128 num_ = 0;
  Int128 den_ = 1;

  static Int128 gcd128(Int128 a, Int128 b) {
    unsigned __int128 x = a < 0 ? -static_cast<unsigned __int128>(a) : static_cast<unsigned __int128>(a);
    unsigned __int128 y = b < 0 ? -static_cast<unsigned __int128>(b) : static_cast<unsigned __int128>(b);
    while (y != 0) {
      unsigned __int128 t = x % y;
      x = y;
      y = t;
    }
    return x == 0 ? Int128(1) : static_cast<Int128>(x);
  }

  static Int128 checked_mul(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("rational multiply overflow");
    return r;
  }
  static Int128 checked_add(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("rational add overflow");
    return r;
  }

  static int cmp(const Rational& a, const Rational& b) {
    Int128 g = gcd128(a.den_, b.den_);
    Int128 lhs = checked_mul(a.num_, b.den_ / g);
    Int128 rhs = checked_mul(b.num_, a.den_ / g);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }

  void normalize() {
    if (den_ == 0) throw ParameterError("Rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Int128 g = gcd128(num_, den_);
    num_ /= g;
    den_ /= g;
  }
};

}  // namespace cex
