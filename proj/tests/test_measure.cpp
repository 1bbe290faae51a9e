#include <doctest.h>

#include <cmath>
#include <memory>

#include "cex/constructions.hpp"
#include "cex/measure.hpp"
#include "cex/verify.hpp"

using namespace cex;

namespace {

std::shared_ptr<const PathologySurface> half_surface(int depth) {
  return std::make_shared<const PathologySurface>(build_pathology(SeqSpec::geometric(0.5), depth));
}

}  // namespace

TEST_CASE("distribution basics") {
  Fn1 lnmag = make_log_magnitude();
  CHECK(distribution(lnmag, 0.0, DistMethod::Exact) == 1.0);  // full domain at alpha = 0
  CHECK(distribution(lnmag, 4.0, DistMethod::Exact) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
  CHECK(distribution_grid(lnmag, 4.0, 1 << 20).value == doctest::Approx(std::exp(-4.0)).epsilon(1e-4));
  CHECK_THROWS_AS(distribution(make_sine_square(), 0.5, DistMethod::Exact), MethodError);
}

TEST_CASE("derivative field distribution matches the closed form") {
  auto s = half_surface(8);
  DerivativeField fx = derivative_field(s, Axis::X);
  // k_n = 1, d_n = 2^-n: lambda(|f'_x| >= 2^n) = sum_{m=n}^{8} 4^-m / 2
  for (int n = 1; n <= 8; ++n) {
    Rational expect;
    for (int m = n; m <= 8; ++m) expect += Rational::pow2(-2 * m) / Rational(2);
    CHECK(fx.distribution_exact(std::ldexp(1.0, n)) == expect);
  }
  CHECK(fx.distribution_exact(0.0) == Rational(1));
  // non-increasing in alpha
  double prev = 2.0;
  for (double a : {0.5, 1.0, 2.0, 4.0, 8.0, 300.0}) {
    double cur = distribution(fx, a);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("pyramid super-level sets are exact centered squares") {
  auto s = half_surface(3);
  Fn2 fn = pathology_fn(*s);
  // level n has peak 1/2: at alpha = 1/4 the slice of each square has side d_n/2
  Rational expect;
  for (int n = 1; n <= 3; ++n) {
    Rational side = Rational::pow2(-n) / Rational(2);
    expect += side * side;
  }
  CHECK(distribution(fn, 0.25, DistMethod::Exact) == doctest::Approx(expect.to_double()).epsilon(1e-15));
  // grid agreement within the first-order boundary bound, halving resolutions
  double exact = distribution(fn, 0.25, DistMethod::Exact);
  double prev_bound = HUGE_VAL;
  for (std::int64_t cells : {256, 512, 1024, 2048}) {
    GridDistribution g = distribution_grid(fn, 0.25, cells);
    double bound = 4.0 * g.cell_measure * static_cast<double>(g.boundary_cells);
    CHECK(std::fabs(g.value - exact) <= bound);
    CHECK(bound <= prev_bound);
    prev_bound = bound;
  }
}

TEST_CASE("piecewise-linear distributions are exact") {
  Fn1 diag = diagonal(pathology_fn(*half_surface(4)));
  REQUIRE(diag.exact);
  // |diag| >= 1/4 on the middle half of each tent: length d_n/2 per level
  Rational expect;
  for (int n = 1; n <= 4; ++n) expect += Rational::pow2(-n) / Rational(2);
  CHECK(diag.exact->distribution_exact(Rational(1, 4)) == expect);
  CHECK(distribution(diag, 0.25, DistMethod::Exact) == expect.to_double());
}

TEST_CASE("gamma identity via quadrature with the analytic tail") {
  Fn1 lnmag = make_log_magnitude();
  const double expect[] = {1.0, 2.0, 6.0};
  for (int p = 1; p <= 3; ++p) {
    LpResult r = lp_norm(lnmag, static_cast<double>(p), LpMethod::Quadrature);
    CHECK(r.converged);
    CHECK(r.integral == doctest::Approx(expect[p - 1]).epsilon(1e-8));
  }
  LpResult frac = lp_norm(lnmag, 1.5, LpMethod::Quadrature);
  CHECK(frac.integral == doctest::Approx(std::tgamma(2.5)).epsilon(1e-8));
  // the analytic route is the same number
  LpResult analytic = lp_norm(lnmag, 2.0);
  CHECK(analytic.method == "analytic");
  CHECK(analytic.integral == 2.0);
}

TEST_CASE("layer-cake norms of the derivative field") {
  auto s = half_surface(6);
  DerivativeField fx = derivative_field(s, Axis::X);
  // (2^n)^2 * 4^-n / 2 = 1/2 per level
  LpResult sq = lp_norm(fx, 2.0);
  CHECK(sq.integral == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(sq.norm == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  // norm monotonicity on a probability domain
  CHECK(lp_norm(fx, 1.5).norm <= lp_norm(fx, 2.0).norm);
  CHECK(lp_norm(fx, 2.0).norm <= lp_norm(fx, 4.0).norm);
  // numerical oracle: central differences of a shallower surface on a grid
  auto s4 = half_surface(4);
  double exact4 = lp_norm(derivative_field(s4, Axis::X), 2.0).integral;
  Fn2 fn = pathology_fn(*s4);
  double h = 1e-7;
  IntegralResult grid = integrate_square_midpoint(
      [&](double x, double y) {
        double left = std::max(x - h, 0.0), right = std::min(x + h, 1.0);
        double d = (fn(right, y) - fn(left, y)) / (right - left);
        return d * d;
      },
      1e-4, 2048, 2048);
  CHECK(std::fabs(grid.value - exact4) <= 5e-2 * exact4);
}

TEST_CASE("zero fields have zero norm at every p") {
  StepFunction zero({Rational(0), Rational(1)}, {Rational(0)});
  for (double p : {1.0, 2.0, 4.0}) CHECK(lp_norm(zero, p).integral == 0.0);
}

TEST_CASE("divergent integrands are flagged, not silently summed") {
  Fn1 inv;
  inv.name = "1/x";
  inv.domain = Interval(0.0, 1.0);
  inv.singular_left = true;  // integrated from 2^-60 up, diverges under refinement
  inv.f = [](double x) { return x == 0.0 ? HUGE_VAL : 1.0 / x; };
  LpResult r = lp_norm(inv, 1.5, LpMethod::Quadrature);
  CHECK(r.divergence_suspected);
}

TEST_CASE("dominance check: reflexive, and broken by scaling") {
  Fn1 lnmag = make_log_magnitude();
  Measurable g = make_measurable(lnmag);
  std::vector<double> alphas{1.0, 2.0, 4.0};
  std::vector<double> ps{1.5, 2.0};
  DominanceReport same = dominance_check(g, g, alphas, ps);
  CHECK(same.overall);
  Fn1 doubled;
  doubled.name = "2|ln|";
  doubled.domain = Interval(0.0, 1.0);
  doubled.singular_left = true;
  doubled.f = [](double x) { return x == 0.0 ? HUGE_VAL : 2.0 * std::fabs(std::log(x)); };
  doubled.analytic_distribution = [](double alpha) { return alpha <= 0.0 ? 1.0 : std::exp(-alpha / 2.0); };
  doubled.analytic_lp_integral = [](double p) { return std::pow(2.0, p) * std::tgamma(p + 1.0); };
  DominanceReport scaled = dominance_check(make_measurable(doubled), g, alphas, ps);
  CHECK_FALSE(scaled.overall);
  bool some_alpha_failed = false;
  for (const auto& row : scaled.distribution_rows) some_alpha_failed = some_alpha_failed || !row.pass;
  CHECK(some_alpha_failed);
}

TEST_CASE("dominance of the built field under the log distribution") {
  SeqSpec u = seq_transform(corollary3_params(12));
  auto s = std::make_shared<const PathologySurface>(build_pathology(u, pathology_max_safe_depth(u, 12)));
  DerivativeField fx = derivative_field(s, Axis::X);
  Fn2 g = lift(make_log_magnitude());
  std::vector<double> alphas;
  for (int n = 1; n <= 10; ++n) alphas.push_back(std::ldexp(1.0, n));
  DominanceReport rep = dominance_check(make_measurable(fx), make_measurable(g), alphas, {1.5, 2.0, 4.0}, 1e-8);
  CHECK(rep.overall);
  for (const auto& row : rep.norm_rows)
    CHECK(row.rhs == doctest::Approx(std::pow(std::tgamma(row.at + 1.0), 1.0 / row.at)).epsilon(1e-12));
}

TEST_CASE("verify_bounds passes exactly for the acceptance families") {
  for (SeqSpec u : {SeqSpec::geometric(0.5), seq_transform(harmonic_base(14))}) {
    MeasureReport rep = verify_bounds(build_pathology(u, 12));
    CHECK(rep.overall);
    for (const auto& c : rep.checks) {
      CHECK(c.pass);
      CHECK(c.exact);  // both families have exact tails
      CHECK(c.lhs <= c.rhs + 1e-12);
    }
    CHECK(rep.checks.size() == 1 + 2 * 12);
  }
}

TEST_CASE("verify_bounds on a depth-1 surface is the defining inequality") {
  MeasureReport rep = verify_bounds(build_pathology(SeqSpec::geometric(0.5), 1));
  REQUIRE(rep.checks.size() == 3);
  CHECK(rep.checks[0].id == "support");
  CHECK(rep.overall);
}

TEST_CASE("harmonic-squared tails come from the trigamma function") {
  SeqSpec u = SeqSpec::harmonic_squared();
  CHECK(u.tail(1) == doctest::Approx(1.6449340668482264).epsilon(1e-12));  // pi^2/6
  double partial = 0.0;
  for (int k = 1; k < 2000; ++k) partial += u.value(k);
  CHECK(u.tail(2000) == doctest::Approx(u.tail(1) - partial).epsilon(1e-9));
  MeasureReport rep = verify_bounds(build_pathology(u, 10));
  CHECK(rep.overall);
}
