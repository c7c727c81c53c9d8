#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlh/solver.hpp"

using namespace nlh;
using doctest::Approx;

namespace {

Scenario base_scenario(double alpha = 1.0, double h = 1.0 / 32.0) {
  Scenario sc;
  sc.kernel = fractional_kernel(1, alpha);
  sc.grid = make_grid({1, DomainShape::box, 1.0, 3.0, h});
  sc.schedule = TimeSchedule::uniform(0.0, 0.1, 0.01);
  return sc;
}

double max_abs_diff(const Solution& a, const Solution& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.field.size(); ++k)
    m = std::max(m, (a.field.at(k).values() - b.field.at(k).values()).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

TEST_CASE("time schedules") {
  const auto u = TimeSchedule::uniform(0.0, 1.0, 0.3);
  CHECK(u.times.front() == 0.0);
  CHECK(u.times.back() == 1.0);
  for (std::size_t k = 1; k < u.times.size(); ++k) CHECK(u.times[k] > u.times[k - 1]);
  const auto g = TimeSchedule::graded(-1.0, 0.5, 0.25, 10, 4);
  for (int k = 1; k <= 10; ++k) {
    const double t = std::ldexp(1.0, -k);
    CHECK(std::find(g.times.begin(), g.times.end(), t) != g.times.end());
  }
  CHECK(std::find(g.times.begin(), g.times.end(), 0.0) != g.times.end());
  CHECK(g.end() == 0.5);
  CHECK_THROWS_AS(TimeSchedule::graded(0.0, 0.5, 0.25, 10, 4), PreconditionError);
}

TEST_CASE("constants are preserved") {
  for (Scheme s : {Scheme::explicit_euler, Scheme::implicit_euler}) {
    for (double c : {1.0, -2.5}) {
      Scenario sc = base_scenario(1.3);
      KernelSpec k = fractional_kernel(1, 1.3, 1.0, 2.0);
      k.coefficient = CoefficientRule::time_oscillating(0.05, 1.0, 2.0);
      sc.kernel = k;
      sc.initial = DataRule::constant(c);
      sc.exterior = DataRule::constant(c);
      sc.schedule = TimeSchedule::uniform(0.0, 0.02, 1e-4);
      const Solution sol = solve(sc, {s});
      CHECK(sol.max_value() == Approx(c).epsilon(1e-13));
      CHECK(sol.min_value() == Approx(c).epsilon(1e-13));
    }
  }
}

TEST_CASE("one explicit step of a unit source") {
  Scenario sc = base_scenario();
  sc.source = DataRule::constant(1.0);
  sc.schedule = TimeSchedule::uniform(0.0, 4e-4, 1e-4);
  const Solution sol = solve(sc, {Scheme::explicit_euler});
  const Vector u1 = sol.field.at(1).interior_values();
  CHECK(u1.minCoeff() == Approx(1e-4).epsilon(1e-14));
  CHECK(u1.maxCoeff() == Approx(1e-4).epsilon(1e-14));
  const Vector u4 = sol.field.at(4).interior_values();
  CHECK(u4.maxCoeff() <= 4e-4 + 1e-15);
  CHECK(u4.maxCoeff() > 3.9e-4);
}

TEST_CASE("CFL violation reports step 0") {
  Scenario sc = base_scenario();
  sc.schedule = TimeSchedule::uniform(0.0, 0.1, 0.05);
  try {
    solve(sc, {Scheme::explicit_euler});
    FAIL("expected a CFL error");
  } catch (const NumericalError& e) {
    CHECK(e.step() == 0);
    CHECK(std::string(e.what()).find("CFL") != std::string::npos);
  }
}

TEST_CASE("Gaussian bump close to the local heat solution at alpha = 1.99") {
  Scenario sc = base_scenario(1.99, 1.0 / 128.0);
  const double s = 0.1, T = 0.01;
  sc.initial = DataRule::gaussian(origin(1), s, 1.0);
  sc.schedule = TimeSchedule::uniform(0.0, T, 1e-4);
  const Solution sol = solve(sc);
  const Field& f = sol.field.at(sol.field.size() - 1);
  const double v = s * s + 2.0 * T;
  double err = 0.0, peak = 0.0;
  for (std::size_t n : sc.grid->nodes_in_ball(origin(1), 0.5)) {
    const double x = sc.grid->coord(n)[0];
    const double exact = s / std::sqrt(v) * std::exp(-x * x / (2.0 * v));
    err = std::max(err, std::abs(f[n] - exact));
    peak = std::max(peak, exact);
  }
  CHECK(err / peak <= 0.05);
}

TEST_CASE("residual audit") {
  SUBCASE("constant solution") {
    Scenario sc = base_scenario();
    sc.initial = DataRule::constant(1.0);
    sc.exterior = DataRule::constant(1.0);
    const Solution sol = solve(sc);
    CHECK(residual_check(sol, sc).max_residual < 1e-12);
    CHECK(residual_check(sol, sc).test_functions == 10);
  }
  SUBCASE("random field is far from a solution") {
    Scenario sc = base_scenario();
    sc.initial = DataRule::cosine(1.0);
    sc.exterior = DataRule::cosine(1.0);
    const Solution sol = solve(sc);
    const double good = residual_check(sol, sc).max_residual;
    Solution bad = sol;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    SpaceTimeField noisy;
    for (std::size_t k = 0; k < sol.field.size(); ++k) {
      Vector v = sol.field.at(k).values();
      for (std::size_t n : sc.grid->interior_nodes()) v[static_cast<Eigen::Index>(n)] += 0.1 * nd(rng);
      noisy.push_back(sol.field.times()[k], Field(sc.grid, v, sc.exterior, sol.field.times()[k]));
    }
    bad.field = noisy;
    CHECK(residual_check(bad, sc).max_residual > 10.0 * good);
  }
  SUBCASE("first order in time") {
    Scenario sc = base_scenario();
    sc.initial = DataRule::cosine(1.0);
    sc.exterior = DataRule::cosine(1.0);
    sc.schedule = TimeSchedule::uniform(0.0, 0.1, 0.01);
    const double r1 = residual_check(solve(sc), sc).max_residual;
    sc.schedule = TimeSchedule::uniform(0.0, 0.1, 0.005);
    const double r2 = residual_check(solve(sc), sc).max_residual;
    CHECK(r2 / r1 == Approx(0.5).epsilon(0.2));
  }
}

TEST_CASE("comparison principle") {
  Scenario lo = base_scenario(0.8);
  lo.initial = DataRule::gaussian(origin(1), 0.2, 1.0);
  lo.exterior = DataRule::ball(make_point(2.0), 0.5, 1.0);
  SUBCASE("identical scenarios") {
    const auto r = comparison_check(lo, lo);
    CHECK(r.ordered);
    CHECK(r.max_gap == 0.0);
  }
  SUBCASE("shifted exterior data") {
    Scenario hi = lo;
    hi.exterior = lo.exterior + DataRule::constant(1.0);
    const auto r = comparison_check(lo, hi);
    CHECK(r.ordered);
    CHECK(r.max_gap <= 1.0 + 1e-12);
  }
  SUBCASE("nonnegative data give nonnegative solutions") {
    for (Scheme s : {Scheme::explicit_euler, Scheme::implicit_euler}) {
      Scenario sc = lo;
      sc.source = DataRule::ball(origin(1), 0.3, 2.0);
      sc.schedule = TimeSchedule::uniform(0.0, 0.01, 1e-4);
      CHECK(solve(sc, {s}).min_value() >= -1e-12);
    }
  }
  SUBCASE("mismatched discretizations") {
    Scenario other = lo;
    other.grid = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 16.0});
    CHECK_THROWS_AS(comparison_check(lo, other), PreconditionError);
  }
}

TEST_CASE("explicit and implicit agree to first order") {
  Scenario sc = base_scenario(1.0, 1.0 / 16.0);
  sc.initial = DataRule::gaussian(origin(1), 0.3, 1.0);
  double prev = 0.0;
  for (int r = 0; r < 2; ++r) {
    sc.schedule = TimeSchedule::uniform(0.0, 0.05, 2e-3 / (1 << r));
    const double gap = max_abs_diff(solve(sc, {Scheme::explicit_euler}), solve(sc, {Scheme::implicit_euler}));
    if (r == 1) CHECK(prev / gap >= 1.7);
    prev = gap;
  }
}
