#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cex/errors.hpp"
#include "cex/rational.hpp"
#include "cex/special.hpp"

namespace cex {

/// A summable positive sequence (u_n) given by a named family. Values are
/// served on demand; exact rational values/tails are provided where the
/// family permits, since the measure checks downstream want exact right-hand
/// sides whenever they can get them.
class SeqSpec {
 public:
  enum class Family { Geometric, HarmonicSquared, Explicit, Transformed };

  static SeqSpec geometric(double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ParameterError("geometric ratio must lie in (0,1)");
    SeqSpec s;
    s.family_ = Family::Geometric;
    s.ratio_ = ratio;
    s.name_ = "geometric:" + format_ratio(ratio);
    // exact ratio when the double is a small dyadic (1/2, 1/4, 3/8, ...)
    try {
      Rational r = Rational::from_double(ratio);
      if (r.den() <= Int128(1) << 20) s.ratio_exact_ = r;
    } catch (const Error&) {
    }
    return s;
  }

  static SeqSpec harmonic_squared() {
    SeqSpec s;
    s.family_ = Family::HarmonicSquared;
    s.name_ = "harmonic-squared";
    return s;
  }

  static SeqSpec explicit_list(std::vector<double> values, std::string name) {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!(values[i] >= 0.0)) throw ParameterError("explicit sequence values must be >= 0");
    SeqSpec s;
    s.family_ = Family::Explicit;
    s.values_ = std::move(values);
    s.name_ = std::move(name);
    return s;
  }

  static SeqSpec explicit_exact(std::vector<Rational> values, std::string name) {
    SeqSpec s;
    s.family_ = Family::Explicit;
    s.values_.reserve(values.size());
    for (const auto& v : values) {
      if (v.sign() < 0) throw ParameterError("explicit sequence values must be >= 0");
      s.values_.push_back(v.to_double());
    }
    s.exact_values_ = std::move(values);
    s.name_ = std::move(name);
    return s;
  }

  /// Lemma-style transform u_n = v_n/n - v_{n+1}/(n+1) of a non-increasing
  /// positive base sequence; tails telescope to v_n/n.
  static SeqSpec transformed(SeqSpec base) {
    SeqSpec s;
    s.family_ = Family::Transformed;
    s.base_ = std::make_shared<SeqSpec>(std::move(base));
    s.name_ = "transform:" + s.base_->name();
    return s;
  }

  Family family() const { return family_; }
  const std::string& name() const { return name_; }

  /// u_n for n >= 1.
  double value(int n) const {
    require_index(n);
    switch (family_) {
      case Family::Geometric:
        return std::pow(ratio_, n);
      case Family::HarmonicSquared:
        return 1.0 / (static_cast<double>(n) * static_cast<double>(n));
      case Family::Explicit:
        if (n > static_cast<int>(values_.size()))
          throw ParameterError("sequence index " + std::to_string(n) + " beyond explicit list");
        return values_[static_cast<std::size_t>(n - 1)];
      case Family::Transformed: {
        double vn = base_->value(n);
        double vn1 = base_->value(n + 1);
        if (vn1 > vn)
          throw MonotonicityError("transform base increases at index " + std::to_string(n), n);
        return vn / n - vn1 / (n + 1);
      }
    }
    throw Error("unreachable");
  }

  std::optional<Rational> exact_value(int n) const {
    require_index(n);
    try {
      switch (family_) {
        case Family::Geometric: {
          if (!ratio_exact_) return std::nullopt;
          Rational r = 1;
          for (int i = 0; i < n; ++i) r *= *ratio_exact_;
          return r;
        }
        case Family::HarmonicSquared:
          return Rational(1, static_cast<long long>(n) * n);
        case Family::Explicit:
          if (!exact_values_.empty()) {
            if (n > static_cast<int>(exact_values_.size()))
              throw ParameterError("sequence index " + std::to_string(n) + " beyond explicit list");
            return exact_values_[static_cast<std::size_t>(n - 1)];
          }
          return std::nullopt;
        case Family::Transformed: {
          auto vn = base_->exact_value(n);
          auto vn1 = base_->exact_value(n + 1);
          if (!vn || !vn1) return std::nullopt;
          if (*vn1 > *vn)
            throw MonotonicityError("transform base increases at index " + std::to_string(n), n);
          return *vn / Rational(n) - *vn1 / Rational(n + 1);
        }
      }
    } catch (const ArithmeticOverflow&) {
      return std::nullopt;
    }
    return std::nullopt;
  }

  /// Tail sum_{k>=n} u_k: closed form for geometric and transformed families,
  /// trigamma for 1/k^2, plain partial sum for finite explicit lists.
  double tail(int n) const {
    require_index(n);
    switch (family_) {
      case Family::Geometric:
        return std::pow(ratio_, n) / (1.0 - ratio_);
      case Family::HarmonicSquared:
        return trigamma(static_cast<double>(n));
      case Family::Explicit: {
        double s = 0.0;
        for (int k = static_cast<int>(values_.size()); k >= n; --k)
          s += values_[static_cast<std::size_t>(k - 1)];
        return s;
      }
      case Family::Transformed:
        return base_->value(n) / n;
    }
    throw Error("unreachable");
  }

  std::optional<Rational> exact_tail(int n) const {
    require_index(n);
    try {
      switch (family_) {
        case Family::Geometric: {
          if (!ratio_exact_) return std::nullopt;
          Rational rn = 1;
          for (int i = 0; i < n; ++i) rn *= *ratio_exact_;
          return rn / (Rational(1) - *ratio_exact_);
        }
        case Family::Transformed: {
          auto vn = base_->exact_value(n);
          if (!vn) return std::nullopt;
          return *vn / Rational(n);
        }
        default:
          return std::nullopt;
      }
    } catch (const ArithmeticOverflow&) {
      return std::nullopt;
    }
  }

  /// Base sequence of a transformed spec (null otherwise).
  const SeqSpec* base() const { return base_.get(); }

 private:
  Family family_ = Family::Geometric;
  std::string name_;
  double ratio_ = 0.5;
  std::optional<Rational> ratio_exact_;
  std::vector<double> values_;
  std::vector<Rational> exact_values_;
  std::shared_ptr<const SeqSpec> base_;

  static void require_index(int n) {
    if (n < 1) throw ParameterError("sequence index must be >= 1");
  }

  static std::string format_ratio(double r) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", r);
    return buf;
  }
};

/// The sequence transform of the lemma: requires positive non-increasing v,
/// returns u with u_n = v_n/n - v_{n+1}/(n+1), so sum_{k>=n} u_k = v_n/n <= v_n.
inline SeqSpec seq_transform(SeqSpec v) { return SeqSpec::transformed(std::move(v)); }

/// v_n = 1/n as an exact explicit list (a transform base; not itself summable).
inline SeqSpec harmonic_base(int n_max) {
  if (n_max < 1) throw ParameterError("harmonic_base needs n_max >= 1");
  std::vector<Rational> v;
  v.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) v.emplace_back(1, n);
  return SeqSpec::explicit_exact(std::move(v), "harmonic");
}

/// v_n = exp(-2^{n+1}): the exact distribution values lambda(|ln x| >= 2^{n+1})
/// on (0,1], feeding seq_transform for the L^p-family construction. One extra
/// value is stored so the transform is usable up to index n_max.
inline SeqSpec corollary3_params(int n_max) {
  if (n_max < 1) throw ParameterError("corollary3_params needs n_max >= 1");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 1; n <= n_max + 1; ++n) v.push_back(std::exp(-std::exp2(static_cast<double>(n + 1))));
  return SeqSpec::explicit_list(std::move(v), "corollary3");
}

}  // namespace cex
