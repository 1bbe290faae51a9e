#include <doctest.h>

#include <cmath>

#include "cex/constructions.hpp"
#include "cex/fn.hpp"

using namespace cex;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("gallery evaluations match the defining formulas") {
  Fn1 f = make_xlnx();
  CHECK(f(1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(f(0.0) == 0.0);  // continuous extension
  Fn1 g = make_sine_square();
  CHECK(g(2.0 / kPi) == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-14));
  CHECK(g(0.0) == 0.0);
  Fn2 s = make_schwarz();
  CHECK(s(0.0, 0.0) == 0.0);
  CHECK(s(1.0, 1.0) == 1.0);
}

TEST_CASE("evaluation outside the domain names the offending point") {
  Fn1 f = make_xlnx();
  CHECK_THROWS_AS(f(1.5), DomainError);
  CHECK_THROWS_AS(f(-0.25), DomainError);
  try {
    f(2.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("2.0") != std::string::npos);
  }
}

TEST_CASE("compose2 of the Schwarz function with the identity is the diagonal jump") {
  Fn2 s = make_schwarz();
  Fn1 h = compose2(s, make_identity(), make_identity());
  CHECK(h(0.0) == 0.0);
  for (double t : {1e-6, 0.25, 0.5, 1.0}) CHECK(h(t) == 1.0);
}

TEST_CASE("lifted composition ignores the second path") {
  Fn1 f = make_xlnx();
  Fn1 g = make_sine_square();
  Fn1 via_lift = compose2(lift(f), g, g);
  Fn1 direct = compose1(f, g);
  for (int i = 0; i <= 1000; ++i) {
    double t = static_cast<double>(i) / 1000.0;
    CHECK(via_lift(t) == direct(t));  // identical evaluation path, zero deviation
  }
}

TEST_CASE("compose2 through constants is constant") {
  Fn2 s = make_schwarz();
  Fn1 h = compose2(s, make_constant(0.25), make_constant(0.5));
  double expect = s(0.25, 0.5);
  for (double t : {0.0, 0.3, 1.0}) CHECK(h(t) == expect);
}

TEST_CASE("compose2 rejects inner ranges escaping the square") {
  Fn2 s = make_schwarz();
  Fn1 bad;
  bad.name = "escape";
  bad.domain = Interval(0.0, 1.0);
  bad.f = [](double t) { return 1.5 * t; };
  Fn1 h = compose2(s, bad, make_identity());
  CHECK_THROWS_AS(h(0.9), CompositionError);
  CHECK(h(0.5) == doctest::Approx(s(0.75, 0.5)));
}

TEST_CASE("sections of the Schwarz function") {
  Fn2 s = make_schwarz();
  Fn1 base = section(s, Axis::X, 0.0);
  for (double x : {0.0, 0.1, 0.7, 1.0}) CHECK(base(x) == 0.0);
  CHECK_THROWS_AS(section(s, Axis::X, 1.5), DomainError);
  Fn1 at_half = section(s, Axis::Y, 0.5);  // y varies, x = 0.5
  CHECK(at_half(0.5) == 1.0);
}

TEST_CASE("sections of a lift reproduce the inner function") {
  Fn1 f = make_xlnx();
  Fn2 phi = lift(f);
  for (double level : {0.0, 0.3, 1.0}) {
    Fn1 s = section(phi, Axis::X, level);
    for (int i = 0; i <= 100; ++i) {
      double x = static_cast<double>(i) / 100.0;
      CHECK(s(x) == f(x));
    }
  }
  Fn1 fixed = section(phi, Axis::Y, 0.25);
  for (double y : {0.0, 0.5, 1.0}) CHECK(fixed(y) == f(0.25));
}

TEST_CASE("diagonal combinators") {
  Fn1 f = make_sine_square();
  Fn1 d = diagonal(lift(f));
  for (double t : {0.0, 0.2, 0.9}) CHECK(d(t) == f(t));
  Fn1 sd = diagonal(make_schwarz());
  CHECK(sd(0.0) == 0.0);
  CHECK(sd(1e-6) == 1.0);  // jump at the origin
}

TEST_CASE("pathology surface evaluation and sections") {
  SeqSpec u = SeqSpec::geometric(0.5);
  Fn2 fn = pathology_fn(build_pathology(u, 1));
  CHECK(fn(0.75, 0.75) == 0.5);  // single square [1/2,1]^2, peak 1/(2 k_1)
  CHECK(fn(0.5, 0.5) == 0.0);
  CHECK(fn(0.75, 0.4) == 0.0);  // off the square

  Fn2 deep = pathology_fn(build_pathology(u, 6));
  // levels tile (2^-6, 1]; a line through a band endpoint sees only boundaries
  for (double level : {0.0, 0.5, 1.0, std::ldexp(1.0, -8)}) {
    Fn1 s = section(deep, Axis::X, level);
    for (int i = 0; i <= 1000; ++i) CHECK(s(static_cast<double>(i) / 1000.0) == 0.0);
  }
  CHECK_THROWS_AS(deep(1.5, 0.5), DomainError);
}

TEST_CASE("compose2 with identities agrees with the diagonal descriptor") {
  SeqSpec u = SeqSpec::geometric(0.5);
  Fn2 fn = pathology_fn(build_pathology(u, 5));
  Fn1 via_compose = compose2(fn, make_identity(), make_identity());
  Fn1 via_diag = diagonal(fn);
  for (int i = 0; i <= 2000; ++i) {
    double t = static_cast<double>(i) / 2000.0;
    CHECK(via_compose(t) == doctest::Approx(via_diag(t)).epsilon(1e-14));
  }
}

TEST_CASE("piecewise-linear evaluation is exact at breakpoints and affine between") {
  std::vector<Rational> xs{Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)};
  std::vector<Rational> ys{Rational(0), Rational(1, 2), Rational(-1, 4), Rational(1)};
  Fn1 fn = from_piecewise_linear("pl", PiecewiseLinear(xs, ys));
  CHECK(fn(0.25) == 0.5);
  CHECK(fn(0.5) == -0.25);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double a = xs[i].to_double(), b = xs[i + 1].to_double();
    double mid = 0.5 * (a + b);
    double expect = 0.5 * (fn(a) + fn(b));
    CHECK(fn(mid) == doctest::Approx(expect).epsilon(1e-15));
  }
  CHECK(fn.exact->eval_exact(Rational(3, 8)) == Rational(1, 8));
  CHECK(fn.exact->total_variation_exact() == Rational(1, 2) + Rational(3, 4) + Rational(5, 4));
}

TEST_CASE("step function difference on the merged grid") {
  StepFunction a({Rational(0), Rational(1, 2), Rational(1)}, {Rational(1), Rational(-1)});
  StepFunction b({Rational(0), Rational(1, 4), Rational(1)}, {Rational(1), Rational(-1)});
  StepFunction d = a - b;
  CHECK(d.distribution_exact(Rational(1)) == Rational(1, 4));
  CHECK(d.lp_integral_exact(1) == Rational(1, 2));
}
