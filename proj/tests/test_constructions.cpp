#include <doctest.h>

#include <cmath>
#include <memory>

#include "cex/constructions.hpp"
#include "cex/measure.hpp"
#include "cex/variation.hpp"
#include "cex/verify.hpp"

using namespace cex;

TEST_CASE("gallery lookup and errors") {
  CHECK(std::holds_alternative<Fn2>(gallery("schwarz")));
  CHECK(std::holds_alternative<Fn1>(gallery("xlnx")));
  CHECK_THROWS_AS(gallery("octonion"), CatalogError);
  CHECK_THROWS_AS(gallery("const:banana"), CatalogError);
  Fn1 c = std::get<Fn1>(gallery("const:0.25"));
  CHECK(c(0.9) == 0.25);
  Fn2 l = std::get<Fn2>(gallery("lift:sqrt"));
  CHECK(l(0.25, 0.7) == 0.5);
}

TEST_CASE("sqrt of sine-square is x |sin(1/x)|") {
  Fn1 h = make_sqrt_sine();
  for (double x : {0.03, 0.2, 0.55, 1.0})
    CHECK(h(x) == doctest::Approx(x * std::fabs(std::sin(1.0 / x))).epsilon(1e-14));
  CHECK(h(0.0) == 0.0);
}

TEST_CASE("witness search beats the cubic quotient bound") {
  Fn1 f = make_xlnx();
  WitnessSeq w = find_witnesses(f, Interval(0.0, 1.0), 5, 2000);
  REQUIRE(w.size() == 5);
  CHECK(w.max_abs == 1.0);  // |f| peaks at x = 1
  for (int n = 1; n <= 5; ++n) {
    double required = 2.0 * n * n * n * w.max_abs;
    CHECK(w.quotient[static_cast<std::size_t>(n - 1)] >= required);
    if (n > 1) CHECK(w.xs[static_cast<std::size_t>(n - 1)].x < w.xs[static_cast<std::size_t>(n - 2)].x);
  }
}

TEST_CASE("witness search succeeds for sqrt and fails for Lipschitz inputs") {
  WitnessSeq w = find_witnesses(make_sqrt(), Interval(0.0, 1.0), 5, 200);
  CHECK(w.size() == 5);
  CHECK_THROWS_AS(find_witnesses(schauder(2), Interval(0.0, 1.0), 2, 100), WitnessError);
  CHECK_THROWS_AS(find_witnesses(make_identity(), Interval(0.0, 1.0), 1, 100), WitnessError);
}

TEST_CASE("zigzag arithmetic from a single hand-built pair") {
  WitnessSeq w;
  w.xs = {Point::real(0.5)};
  w.ys = {Point::real(0.25)};
  w.d = {0.25};
  w.quotient = {1.0};
  w.max_abs = 1.0;
  ZigzagMap map = build_zigzag(w, 1);
  const ZigzagLevel& lv = map.level(1);
  CHECK(lv.k == 4.0);  // floor(1 / (1 * 1/4))
  CHECK(lv.b == 2.0);  // 2 * 4 * 1/4
  // condition (1): even multiples of d hit x, odd multiples hit y
  for (int i = 0; i <= 4; ++i) CHECK(map.eval1(2.0 * i * 0.25) == 0.5);
  for (int i = 1; i <= 4; ++i) CHECK(map.eval1((2.0 * i - 1.0) * 0.25) == 0.25);
  // linearity inside a piece
  CHECK(map.eval1(0.125) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("zigzag builder rejects unusable pairs") {
  WitnessSeq w;
  w.xs = {Point::real(0.5), Point::real(0.4)};
  w.ys = {Point::real(0.5), Point::real(0.1)};
  w.d = {0.0, 0.3};
  w.quotient = {0.0, 0.0};
  CHECK_THROWS_AS(build_zigzag(w, 1), WitnessError);  // degenerate pair
  WitnessSeq v;
  v.xs = {Point::real(0.9), Point::real(0.4)};
  v.ys = {Point::real(0.8), Point::real(0.1)};
  v.d = {0.1, 0.3};
  v.quotient = {1.0, 1.0};
  CHECK_THROWS_AS(build_zigzag(v, 2), WitnessError);  // d_2 = 0.3 > 1/4
}

TEST_CASE("planar zigzag maps keep unit slope in the Euclidean norm") {
  WitnessSeq w;
  w.xs = {Point::plane(0.5, 0.5), Point::plane(0.25, 0.25)};
  w.ys = {Point::plane(0.5 + 0.06, 0.5 + 0.08), Point::plane(0.25 + 0.03, 0.25 + 0.04)};
  w.d = {0.1, 0.05};
  w.quotient = {10.0, 20.0};
  ZigzagMap map = build_zigzag(w, 2);
  CHECK(map.dim() == 2);
  for (double t : {0.01, 0.05, 0.09}) {
    Point a = map.eval(t);
    Point b = map.eval(t + 0.008);
    double q = distance(a, b) / 0.008;
    CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("zigzag breakpoint gaps equal the stored distance") {
  WitnessSeq w = find_witnesses(make_sqrt(), Interval(0.0, 1.0), 3, 200);
  ZigzagMap map = build_zigzag(w, 3);
  for (int n = 1; n <= 3; ++n) {
    const ZigzagLevel& lv = map.level(n);
    CHECK(lv.k_exact);
    CHECK(lv.d == std::fabs(lv.x.x - lv.y.x));
    CHECK(lv.b == lv.a + 2.0 * lv.k * lv.d);
    if (n > 1) CHECK(map.level(n).a >= map.level(n - 1).b);
  }
}

TEST_CASE("composition variation closed form agrees with enumeration") {
  Fn1 sq = make_sqrt();
  WitnessSeq w = find_witnesses(sq, Interval(0.0, 1.0), 4, 200);
  ZigzagMap map = build_zigzag(w, 4);
  Fn1 g = zigzag_fn(map);
  Fn1 h = compose2(lift(sq), g, g);
  for (int n = 1; n <= 4; ++n) {
    const ZigzagLevel& lv = map.level(n);
    auto pieces = static_cast<std::int64_t>(2.0 * lv.k);
    std::vector<double> pts;
    for (std::int64_t j = 0; j <= pieces; ++j) pts.push_back(lv.a + static_cast<double>(j) * lv.d);
    Interval span(pts.front(), pts.back());
    Partition p = Partition::from_points(span, std::move(pts));
    CHECK(total_variation(h, p) ==
          doctest::Approx(zigzag_composition_variation(sq, map, n)).epsilon(1e-12));
  }
}

TEST_CASE("pathology construction at geometric one-half") {
  PathologySurface s = build_pathology(SeqSpec::geometric(0.5), 1);
  const PathologyLevel& lv = s.level(1);
  CHECK(lv.k == 1);               // floor(1/(4 * 1/2)) + 1 = 0 + 1
  CHECK(lv.d == Rational(1, 2));  // 1/(2^1 * 1)
  CHECK(lv.peak == Rational(1, 2));
  PyramidSquare sq = lv.square(1);
  CHECK(sq.lo == Rational(1, 2));
  CHECK(sq.hi == Rational(1));
  CHECK(sq.center == Rational(3, 4));
  CHECK(s.eval(0.75, 0.75) == 0.5);
}

TEST_CASE("every level satisfies k d^2 <= u and tiles its band") {
  for (SeqSpec u : {SeqSpec::geometric(0.5), seq_transform(harmonic_base(14))}) {
    PathologySurface s = build_pathology(u, 12);
    for (const auto& lv : s.levels()) {
      auto ue = u.exact_value(lv.n);
      REQUIRE(ue);
      CHECK(lv.support_measure() <= *ue);
      CHECK(Rational::from128(cex::Int128(lv.k), 1) * lv.d == Rational::pow2(-lv.n));
    }
  }
}

TEST_CASE("depth limit reports the maximal safe depth") {
  SeqSpec u = seq_transform(corollary3_params(10));
  int safe = pathology_max_safe_depth(u, 10);
  CHECK(safe == 4);  // k_5 would need about 3e25 squares
  CHECK_NOTHROW(build_pathology(u, safe));
  try {
    build_pathology(u, safe + 1);
    CHECK(false);
  } catch (const DepthLimitError& e) {
    CHECK(e.max_safe == safe);
  }
}

TEST_CASE("sequence transform telescopes exactly") {
  SeqSpec u = seq_transform(harmonic_base(40));
  for (int n = 1; n <= 8; ++n) {
    auto un = u.exact_value(n);
    REQUIRE(un);
    Rational expect = Rational(1, n) / Rational(n) - Rational(1, n + 1) / Rational(n + 1);
    CHECK(*un == expect);
    auto tail = u.exact_tail(n);
    REQUIRE(tail);
    CHECK(*tail == Rational(1, static_cast<long long>(n) * n));
  }
  // partial sums to depth M: sum_{k=n}^{M} u_k = 1/n^2 - 1/(M+1)^2
  for (int n : {1, 3, 7}) {
    Rational partial;
    for (int k = n; k <= 30; ++k) partial += *u.exact_value(k);
    CHECK(partial == Rational(1, static_cast<long long>(n) * n) - Rational(1, 31LL * 31));
  }
  // double route agrees to 1e-12 over deep prefixes
  SeqSpec ud = seq_transform(harmonic_base(10001));
  double acc = 0.0;
  for (int k = 1; k <= 10000; ++k) acc += ud.value(k);
  CHECK(acc == doctest::Approx(1.0 - 1.0 / (10001.0 * 10001.0)).epsilon(1e-12));
}

TEST_CASE("constant base sequences transform to c/(n(n+1))") {
  SeqSpec v = SeqSpec::explicit_exact({Rational(3), Rational(3), Rational(3), Rational(3)}, "const3");
  SeqSpec u = seq_transform(v);
  for (int n = 1; n <= 3; ++n) {
    CHECK(*u.exact_value(n) == Rational(3, static_cast<long long>(n) * (n + 1)));
    CHECK(*u.exact_tail(n) == Rational(3, n));
  }
}

TEST_CASE("increasing bases are rejected with the offending index") {
  SeqSpec v = SeqSpec::explicit_list({0.5, 0.25, 0.8, 0.1}, "bumpy");
  SeqSpec u = seq_transform(v);
  CHECK(u.value(1) > 0.0);
  try {
    u.value(2);
    CHECK(false);
  } catch (const MonotonicityError& e) {
    CHECK(e.index == 2);
  }
}

TEST_CASE("corollary3 parameters are the exact log distribution values") {
  SeqSpec v = corollary3_params(8);
  CHECK(v.value(1) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
  for (int n = 1; n <= 7; ++n) CHECK(v.value(n + 1) < v.value(n));
  // grid oracle: lambda({x : |ln x| >= 4}) is the length of (0, e^-4]
  GridDistribution g = distribution_grid(make_log_magnitude(), 4.0, 1000000);
  CHECK(std::fabs(g.value - std::exp(-4.0)) <= 1e-5);
  SeqSpec u = seq_transform(v);
  double sum = 0.0;
  for (int n = 1; n <= 8; ++n) {
    CHECK(u.value(n) > 0.0);
    sum += u.value(n);
    CHECK(u.tail(n) <= v.value(n));
  }
  CHECK(sum < 1.0);
}

TEST_CASE("rademacher cells and schauder primitives are exact") {
  Fn1 r1 = rademacher(1);
  CHECK(r1(0.25) == 1.0);
  CHECK(r1(0.75) == -1.0);
  Fn1 f1 = schauder(1);
  CHECK(f1(0.0) == 0.0);
  CHECK(f1(0.5) == 0.5);
  CHECK(f1(1.0) == 0.0);
  for (int n = 1; n <= 6; ++n) {
    Fn1 fn = schauder(n);
    REQUIRE(fn.exact);
    CHECK(fn.exact->max_abs_slope() == Rational(1));
    CHECK(fn.exact->total_variation_exact() == Rational(1));
    double est = lipschitz_estimate(fn, fn.domain, 1 << (n + 3));
    CHECK(est == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rademacher differences separate exactly") {
  for (int n = 1; n <= 4; ++n) {
    for (int m = n + 1; m <= 5; ++m) {
      StepFunction diff = rademacher_difference(n, m);
      CHECK(diff.lp_integral_exact(1) == Rational(1));
      CHECK(diff.lp_integral_exact(2) == Rational(2));
      CHECK(diff.lp_integral_exact(3) == Rational(4));
      CHECK(diff.distribution_exact(Rational(2)) == Rational(1, 2));
      LpResult l2 = lp_norm(diff, 2.0);
      CHECK(l2.norm == doctest::Approx(std::pow(2.0, 0.5)).epsilon(1e-15));
    }
  }
}
