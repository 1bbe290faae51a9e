#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cex/errors.hpp"

namespace cex {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) {
    if (!(lo <= hi)) throw ParameterError("interval with lo > hi");
  }

  double length() const { return hi - lo; }

  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

inline Interval unit_interval() { return Interval(0.0, 1.0); }

/// Sorted finite point set including both endpoints of its interval.
struct Partition {
  Interval iv;
  std::vector<double> points;

  static Partition from_points(const Interval& iv, std::vector<double> pts) {
    if (pts.size() < 2) throw ParameterError("partition needs at least two points");
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (!(pts[i - 1] < pts[i])) throw ParameterError("partition points must be strictly increasing");
    if (pts.front() != iv.lo || pts.back() != iv.hi)
      throw ParameterError("partition must include both interval endpoints");
    return Partition{iv, std::move(pts)};
  }

  static Partition uniform(const Interval& iv, std::int64_t cells) {
    if (cells < 1) throw ParameterError("uniform partition needs >= 1 cell");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(cells) + 1);
    for (std::int64_t i = 0; i <= cells; ++i) {
      double t = static_cast<double>(i) / static_cast<double>(cells);
      pts.push_back(iv.lo + t * (iv.hi - iv.lo));
    }
    pts.front() = iv.lo;
    pts.back() = iv.hi;
    return Partition{iv, std::move(pts)};
  }

  /// Midpoint refinement; the result contains this partition.
  Partition refined() const {
    std::vector<double> pts;
    pts.reserve(points.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      pts.push_back(points[i]);
      double mid = 0.5 * (points[i] + points[i + 1]);
      if (mid > points[i] && mid < points[i + 1]) pts.push_back(mid);
    }
    pts.push_back(points.back());
    return Partition{iv, std::move(pts)};
  }

  std::size_t size() const { return points.size(); }
};

}  // namespace cex
