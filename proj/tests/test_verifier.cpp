#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "nlh/tails.hpp"
#include "nlh/verifier.hpp"

using namespace nlh;
using doctest::Approx;

namespace {

/// Solution assembled from a closed-form space-time function; the exterior rule carries `far`.
Solution synthetic(const KernelSpec& k, GridPtr g, double t_end, double dt,
                   const std::function<double(double, const Point&)>& u, const DataRule& far = {}) {
  Solution s;
  s.kernel = k;
  const auto sched = TimeSchedule::uniform(0.0, t_end, dt);
  for (double t : sched.times) {
    Vector v(static_cast<Eigen::Index>(g->node_count()));
    for (std::size_t n = 0; n < g->node_count(); ++n) v[static_cast<Eigen::Index>(n)] = u(t, g->coord(n));
    s.field.push_back(t, Field(g, v, far, t));
  }
  return s;
}

Solution constant_solution(double c, GridPtr g, double t_end, double dt, int dim = 1, double alpha = 1.0) {
  const KernelSpec k = dim == 1 ? fractional_kernel(1, alpha) : axes_kernel(alpha);
  return synthetic(k, g, t_end, dt, [c](double, const Point&) { return c; },
                   c == 0.0 ? DataRule{} : DataRule::constant(c));
}

}  // namespace

TEST_CASE("cylinder geometry") {
  const double t0 = 2.0, R = 0.5, a = 1.5;
  const double Ra = std::pow(R, a), Rh = std::pow(R / 2, a);
  const Point x0 = origin(1);
  using K = CylinderKind;
  auto iv = [&](K k) { return make_cylinder(k, t0, x0, R, a).time_interval(); };
  CHECK(iv(K::forward) == std::make_pair(t0, t0 + Ra));
  CHECK(iv(K::backward) == std::make_pair(t0 - Ra, t0));
  CHECK(iv(K::full) == std::make_pair(t0 - Ra, t0 + Ra));
  CHECK(iv(K::D) == std::make_pair(t0 - 2 * Ra, t0));
  CHECK(iv(K::D_hat) == std::make_pair(t0 - 2 * Ra, t0));
  CHECK(iv(K::D_minus).first == t0 - 2 * Ra);
  CHECK(iv(K::D_minus).second == Approx(t0 - 2 * Ra + Rh));
  CHECK(iv(K::D_plus) == std::make_pair(t0 - Rh, t0));
  CHECK(make_cylinder(K::D, t0, x0, R, a).ball_radius() == 2 * R);
  CHECK(make_cylinder(K::D_hat, t0, x0, R, a).ball_radius() == 3 * R);
  CHECK(make_cylinder(K::D_plus, t0, x0, R, a).ball_radius() == R / 2);
  CHECK(make_cylinder(K::full, t0, x0, R, a).ball_radius() == R);
  CHECK_THROWS_AS(make_cylinder(K::full, t0, x0, 0.0, a), PreconditionError);
}

TEST_CASE("cylinder algebra on resolved index sets") {
  auto g = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 16.0});
  const Solution s = constant_solution(1.0, g, 2.0, 1.0 / 32.0);
  const double t0 = 1.0;
  const auto bw = make_cylinder(CylinderKind::backward, t0, origin(1), 0.5, 1.0).resolve(s.field);
  const auto fw = make_cylinder(CylinderKind::forward, t0, origin(1), 0.5, 1.0).resolve(s.field);
  const auto full = make_cylinder(CylinderKind::full, t0, origin(1), 0.5, 1.0).resolve(s.field);
  std::set<std::size_t> a(bw.times.begin(), bw.times.end()), b(fw.times.begin(), fw.times.end());
  for (std::size_t k : a) CHECK(b.count(k) == 0);
  std::set<std::size_t> u = a;
  u.insert(b.begin(), b.end());
  std::set<std::size_t> f(full.times.begin(), full.times.end());
  f.erase(s.field.nearest(t0));
  CHECK(u == f);
  CHECK(bw.nodes == full.nodes);
  CHECK_THROWS_AS(make_cylinder(CylinderKind::forward, 5.0, origin(1), 0.5, 1.0).resolve(s.field), PreconditionError);
}

TEST_CASE("cyl_stats") {
  auto g = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 16.0});
  SUBCASE("constant") {
    const Solution s = constant_solution(3.0, g, 2.0, 1.0 / 32.0);
    const auto st = cyl_stats(s.field, make_cylinder(CylinderKind::full, 1.0, origin(1), 0.5, 1.0));
    CHECK(st.sup == 3.0);
    CHECK(st.inf == 3.0);
    CHECK(st.mean == Approx(3.0));
    CHECK(st.rms == Approx(3.0));
  }
  SUBCASE("linear in time") {
    const double dt = 1.0 / 64.0;
    const Solution s = synthetic(fractional_kernel(1, 1.0), g, 2.0, dt, [](double t, const Point&) { return t; });
    const auto st = cyl_stats(s.field, make_cylinder(CylinderKind::backward, 1.0, origin(1), 1.0, 1.0));
    CHECK(std::abs(st.sup - 1.0) <= dt);
    CHECK(std::abs(st.inf) <= dt);
    CHECK(std::abs(st.mean - 0.5) <= dt);
  }
  SUBCASE("random field against a brute-force scan") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    Solution s;
    s.kernel = fractional_kernel(1, 1.0);
    for (int k = 0; k <= 40; ++k) {
      Vector v(static_cast<Eigen::Index>(g->node_count()));
      for (auto& x : v) x = ud(rng);
      s.field.push_back(k / 20.0, Field(g, v));
    }
    const Cylinder c = make_cylinder(CylinderKind::D, 1.5, make_point(0.1), 0.25, 0.7);
    const auto st = cyl_stats(s.field, c);
    const auto [a, b] = c.time_interval();
    double mx = -1e9, mn = 1e9, sum = 0, sq = 0;
    std::size_t cnt = 0;
    for (std::size_t k = 0; k < s.field.size(); ++k) {
      const double t = s.field.times()[k];
      if (!(t > a && t < b)) continue;
      for (std::size_t n = 0; n < g->node_count(); ++n) {
        if (!(std::abs(g->coord(n)[0] - 0.1) < 0.5)) continue;
        const double v = s.field.at(k)[n];
        mx = std::max(mx, v);
        mn = std::min(mn, v);
        sum += v;
        sq += v * v;
        ++cnt;
      }
    }
    CHECK(st.sup == mx);
    CHECK(st.inf == mn);
    CHECK(st.mean == Approx(sum / cnt));
    CHECK(st.rms == Approx(std::sqrt(sq / cnt)));
    const auto big = cyl_stats(s.field, make_cylinder(CylinderKind::D_hat, 1.5, make_point(0.1), 0.25, 0.7));
    CHECK(big.sup >= st.sup);
    CHECK(big.inf <= st.inf);
  }
  SUBCASE("too few slices") {
    const Solution s = constant_solution(1.0, g, 2.0, 0.25);
    CHECK_THROWS_AS(cyl_stats(s.field, make_cylinder(CylinderKind::backward, 1.0, origin(1), 0.5, 1.0)),
                    PreconditionError);
  }
}

TEST_CASE("report constant policy") {
  Report r;
  r.left = 2.0;
  r.right = 4.0;
  r.finish();
  CHECK(r.constant == 0.5);
  r.right = 0.0;
  r.finish();
  CHECK(r.infinite);
  CHECK(std::isinf(r.constant));
  r.left = 0.0;
  r.finish();
  CHECK(r.degenerate);
  CHECK(std::isnan(r.constant));
  CHECK_THROWS_AS(r.summand("missing"), PreconditionError);
}

TEST_CASE("Harnack quotient") {
  auto g = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 32.0});
  const double R = 0.2, t0 = 1.0;
  const Solution one = constant_solution(1.0, g, 2.0, 1.0 / 64.0);
  const auto r = harnack_quotient(one, t0, origin(1), R);
  CHECK(r.constant == 1.0);
  CHECK(r.summand("sup") == 1.0);
  CHECK(r.summand("inf") == 1.0);
  CHECK_FALSE(r.provenance.empty());
  CHECK(harnack_quotient(constant_solution(0.0, g, 2.0, 1.0 / 64.0), t0, origin(1), R).degenerate);
  CHECK_THROWS_AS(harnack_quotient(one, t0, origin(1), 0.3), PreconditionError);
  CHECK_THROWS_AS(harnack_quotient(one, 0.5, origin(1), R), PreconditionError);
  const Solution neg = constant_solution(-1.0, g, 2.0, 1.0 / 64.0);
  CHECK_THROWS_AS(harnack_quotient(neg, t0, origin(1), R), PreconditionError);
}

TEST_CASE("Harnack with tails") {
  SUBCASE("globally nonnegative solution") {
    Scenario sc;
    sc.kernel = fractional_kernel(1, 1.0);
    sc.grid = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 32.0});
    sc.initial = DataRule::gaussian(origin(1), 0.2, 1.0) + DataRule::constant(0.5);
    sc.exterior = DataRule::constant(0.5);
    sc.schedule = TimeSchedule::uniform(0.0, 1.2, 1.0 / 64.0);
    const Solution s = solve(sc);
    const auto full = harnack_quotient(s, 0.6, origin(1), 0.125);
    const auto tl = harnack_with_tails(s, 0.6, origin(1), 0.125);
    CHECK(tl.summand("tail_neg") == 0.0);
    CHECK(tl.summand("sup") == full.left);
    CHECK(tl.summand("inf") == full.right);
    CHECK(tl.summand("tail_pos") > 0.0);
  }
  SUBCASE("negative exterior annulus") {
    Scenario sc;
    sc.kernel = fractional_kernel(1, 1.0);
    sc.grid = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 32.0});
    sc.initial = DataRule::constant(1.0);
    sc.exterior = DataRule::constant(1.0) + DataRule::annulus(origin(1), 2.0, 3.0, -2.0);
    sc.schedule = TimeSchedule::uniform(0.0, 1.2, 1.0 / 64.0);
    const Solution s = solve(sc);
    REQUIRE(s.min_interior_value() > 0.0);
    const auto r = harnack_with_tails(s, 0.6, origin(1), 0.125);
    CHECK(r.summand("tail_neg") == Approx(1.0 / 3.0).epsilon(0.01));
  }
  SUBCASE("zero in the domain, nonpositive outside") {
    auto g = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 32.0});
    const DataRule ann = DataRule::annulus(origin(1), 2.0, 3.0, -1.0);
    const Solution s = synthetic(fractional_kernel(1, 1.0), g, 1.2, 1.0 / 64.0, [&](double t, const Point& x) {
      return std::abs(x[0]) < 1.0 ? 0.0 : ann.node_value(t, x, g->h());
    }, ann);
    const auto r = harnack_with_tails(s, 0.6, origin(1), 0.125);
    CHECK(r.left == 0.0);
    CHECK(r.right > 0.0);
    CHECK(r.constant == 0.0);
  }
}

TEST_CASE("weak Harnack ratio of constants") {
  auto g = make_grid({1, DomainShape::box, 4.5, 13.5, 0.25});
  const Solution one = constant_solution(1.0, g, 10.0, 0.125);
  const auto r = weak_harnack_ratio(one, 5.0, origin(1), 1.0);
  CHECK(r.summand("mean") == 1.0);
  CHECK(r.summand("tail") == Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(r.constant - 3.0) <= 1e-6);
  CHECK(weak_harnack_ratio(constant_solution(0.0, g, 10.0, 0.125), 5.0, origin(1), 1.0).degenerate);
}

TEST_CASE("weak Harnack mean never exceeds the Harnack sup") {
  Scenario sc;
  sc.kernel = fractional_kernel(1, 1.5);
  sc.grid = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 32.0});
  sc.initial = DataRule::gaussian(origin(1), 0.2, 1.0);
  sc.schedule = TimeSchedule::uniform(0.0, 1.0, 1.0 / 128.0);
  const Solution s = solve(sc);
  const double R = 0.125, t0 = std::pow(4 * R, 1.5);
  CHECK(weak_harnack_ratio(s, t0, origin(1), R).summand("mean") <= harnack_quotient(s, t0, origin(1), R).left);
}

TEST_CASE("local boundedness ratio") {
  auto g = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 64.0});
  const Solution one = constant_solution(1.0, g, 1.2, 1.0 / 64.0);
  const auto r = locbd_ratio(one, 0.6, origin(1), 0.125);
  CHECK(r.left == 1.0);
  CHECK(r.summand("rms_pos") == Approx(1.0));
  CHECK(r.summand("tail_pos") == Approx(2.0 / 0.125).epsilon(1e-9));
  CHECK(r.constant <= 1.0);
  const Solution neg = constant_solution(-1.0, g, 1.2, 1.0 / 64.0);
  const auto n = locbd_ratio(neg, 0.6, origin(1), 0.125);
  CHECK(n.left == 0.0);
  CHECK(n.degenerate);
}

TEST_CASE("Hoelder report") {
  auto g = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 64.0});
  const KernelSpec k = fractional_kernel(1, 1.0);
  SUBCASE("constants") {
    const Solution c = constant_solution(2.0, g, 1.2, 1.0 / 128.0);
    for (const auto& r : holder_report(c, 1.0, origin(1), 0.2, {0.1, 0.5, 0.9}, 0.5)) CHECK(r.left == 0.0);
  }
  SUBCASE("linear profile") {
    const Solution lin = synthetic(k, g, 1.2, 1.0 / 128.0, [](double, const Point& x) { return x[0]; });
    for (double gam : {0.1, 0.5, 0.9}) {
      const double big = holder_report(lin, 1.0, origin(1), 0.2, {gam}, 0.5).front().left;
      const double small = holder_report(lin, 1.0, origin(1), 0.1, {gam}, 0.5).front().left;
      CHECK(std::isfinite(big));
      CHECK(big <= std::pow(0.2, gam) * std::pow(0.4, 1.0 - gam) * (1.0 + 1e-12));
      CHECK(small < big);
    }
    const auto r = holder_report(lin, 1.0, origin(1), 0.2, {0.5}, 0.5).front();
    CHECK(r.summand("pairs") >= 10000);
  }
  SUBCASE("errors") {
    const Solution c = constant_solution(2.0, g, 1.2, 1.0 / 128.0);
    CHECK_THROWS_AS(holder_report(c, 1.0, origin(1), 0.2, {1.0}, 0.5), PreconditionError);
    CHECK_THROWS_AS(holder_report(c, 1.0, origin(1), 0.2, {0.0}, 0.5), PreconditionError);
    CHECK_THROWS_AS(holder_report(c, 1.0, origin(1), 0.2, {0.5}, 0.0), PreconditionError);
  }
}

TEST_CASE("axes Harnack") {
  auto g = make_grid({2, DomainShape::box, 1.0, 3.0, 1.0 / 16.0});
  const Solution one = constant_solution(1.0, g, 2.0, 1.0 / 32.0, 2);
  const auto r = axes_harnack(one, 1.0, origin(2), 0.25);
  CHECK(r.summand("tail_free_constant") == 1.0);
  CHECK(r.summand("tail_axes") > 0.0);
  CHECK(axes_harnack(constant_solution(0.0, g, 2.0, 1.0 / 32.0, 2), 1.0, origin(2), 0.25).degenerate);

  Solution dens = one;
  dens.kernel = fractional_kernel(2, 1.0);
  CHECK_THROWS_AS(axes_harnack(dens, 1.0, origin(2), 0.25), StructureError);

  Scenario sc;
  sc.kernel = axes_kernel(1.0);
  sc.grid = g;
  sc.exterior = DataRule::ball(make_point(1.5, 0.0), 0.3);
  sc.schedule = TimeSchedule::uniform(0.0, 2.0, 1.0 / 32.0);
  const Solution s = solve(sc);
  const auto a = axes_harnack(s, 1.0, origin(2), 0.25);
  CHECK(a.summand("inf") > 0.0);
  CHECK(a.left > 0.0);
  CHECK(std::isfinite(a.summand("tail_free_constant")));
  CHECK(std::isfinite(a.constant));
}

TEST_CASE("every inequality flags the zero solution") {
  auto g = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 64.0});
  const Solution z = constant_solution(0.0, g, 1.2, 1.0 / 64.0);
  CHECK(harnack_quotient(z, 0.6, origin(1), 0.125).degenerate);
  CHECK(harnack_with_tails(z, 0.6, origin(1), 0.125).degenerate);
  CHECK(weak_harnack_ratio(z, 0.6, origin(1), 0.125).degenerate);
  CHECK(locbd_ratio(z, 0.6, origin(1), 0.125).degenerate);
  for (const auto& r : holder_report(z, 0.6, origin(1), 0.125, {0.5}, 0.5)) CHECK(r.degenerate);
}

TEST_CASE("Harnack constant is invariant under parabolic rescaling") {
  const double a = 1.0;
  auto run = [&](double scale) {
    Scenario sc;
    sc.kernel = fractional_kernel(1, a);
    sc.grid = make_grid({1, DomainShape::box, scale, 3.0 * scale, scale / 64.0});
    sc.initial = DataRule::gaussian(origin(1), 0.25 * scale, 1.0) + DataRule::constant(1.0);
    sc.exterior = DataRule::constant(1.0);
    const double R = 0.125 * scale, T = std::pow(4 * R, a);
    sc.schedule = TimeSchedule::uniform(0.0, 2 * T, std::pow(R, a) / 16);
    return harnack_quotient(solve(sc), T, origin(1), R).constant;
  };
  const double c1 = run(1.0), c2 = run(0.5);
  CHECK(std::abs(c2 / c1 - 1.0) <= 0.15);
}

TEST_CASE("iteration lemma") {
  SUBCASE("geometric series") {
    const auto r = iterate_absorb(0.0, 0.0, 1.0, 1.0, 1.0, 0.5, 1.0, [](double) { return 1.0; });
    CHECK(r.admissible);
    CHECK(r.bound == Approx(2.0).epsilon(1e-14));
    CHECK(r.holds);
    CHECK(r.hypothesis_holds);
  }
  SUBCASE("zero function") {
    const auto r = iterate_absorb(1.0, 0.0, 0.0, 1.0, 1.0, 0.25, 1.0, [](double) { return 0.0; });
    CHECK(r.bound >= 0.0);
    CHECK(r.direct_value == 0.0);
    CHECK(r.holds);
  }
  SUBCASE("blow-up profile") {
    const double rho = 0.3;
    auto f = [&](double r) { return rho / (1.0 - r); };
    const auto r = iterate_absorb(rho, 0.0, 0.0, 1.0, 1.0, 0.5, 1.0, f, 200);
    CHECK(r.hypothesis_holds);
    CHECK(r.direct_value == Approx(2.0 * rho));
    CHECK(r.bound >= f(0.5));
    CHECK(r.holds);
    CHECK(r.chain.front() == 0.5);
    for (std::size_t i = 1; i < r.chain.size(); ++i) CHECK(r.chain[i] > r.chain[i - 1]);
    CHECK(r.chain.back() < 1.0);
  }
  SUBCASE("inadmissible theta") {
    const auto r = iterate_absorb(1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, [](double) { return 0.0; });
    CHECK_FALSE(r.admissible);
    CHECK_FALSE(r.note.empty());
  }
  SUBCASE("hypothesis violation is reported") {
    const auto r = iterate_absorb(0.0, 0.0, 0.1, 1.0, 1.0, 0.5, 1.0, [](double r) { return 10.0 * (1.0 - r); });
    CHECK_FALSE(r.hypothesis_holds);
  }
  CHECK_THROWS_AS(iterate_absorb(-1.0, 0.0, 0.0, 1.0, 1.0, 0.5, 1.0, [](double) { return 0.0; }), PreconditionError);
  CHECK_THROWS_AS(iterate_absorb(1.0, 0.0, 0.0, 0.0, 1.0, 0.5, 1.0, [](double) { return 0.0; }), PreconditionError);
}
