// Acceptance checks. One "PASS Cn: ..." or "FAIL Cn: ..." line per criterion; the exit
// status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlh/counterexample.hpp"
#include "nlh/energy.hpp"
#include "nlh/tails.hpp"
#include "nlh/verifier.hpp"
#include "nlh/workflows.hpp"

using namespace nlh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig load(const std::string& name) { return load_config(std::string(NLH_CONFIG_DIR) + "/" + name); }

Outcome c1_operator_consistency() {
  const DataRule c = DataRule::cosine(1.0);
  std::vector<double> errs;
  std::string vals;
  for (int r = 0; r < 4; ++r) {
    const double h = std::ldexp(2.0, -8 - r);
    auto g = make_grid({1, DomainShape::box, 1.0, 3.0, h});
    const DiscreteOperator op = assemble(fractional_kernel(1, 1.0), g);
    const Vector lu = op.minus_L(Field::from_rule(g, c, c, 0.0), 0.0);
    const double v = lu[g->interior_slot(g->node_at(0))];
    errs.push_back(std::abs(v - std::numbers::pi) / std::numbers::pi);
    vals += fmt(" %.5f", v);
  }
  bool mono = true;
  for (std::size_t i = 1; i < errs.size(); ++i) mono = mono && errs[i] < errs[i - 1];
  return {errs[0] <= 0.01 && mono, "-L cos(0) =" + vals + fmt(" (rel err %.2e at h = 2/256)", errs[0])};
}

Outcome c2_alpha_to_two() {
  const double s = 0.1, T = 0.01;
  std::vector<double> errs;
  for (double a : {1.5, 1.9, 1.99}) {
    Scenario sc;
    sc.kernel = fractional_kernel(1, a);
    sc.grid = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 128.0});
    sc.initial = DataRule::gaussian(origin(1), s, 1.0);
    sc.schedule = TimeSchedule::uniform(0.0, T, 1e-4);
    errs.push_back(heat_oracle_error(solve(sc), {s, 0.5}).rel_error);
  }
  const bool ok = errs[2] <= 0.05 && errs[1] < errs[0] && errs[2] < errs[1];
  return {ok, fmt("relative Linf error vs heat solution at alpha 1.5/1.9/1.99: %.4f %.4f %.4f", errs[0], errs[1], errs[2])};
}

/// Sum of 1-3 random terms. With `far_simple` the rule is constant beyond |x| = 3.
DataRule random_rule(std::mt19937_64& rng, bool nonneg, bool far_simple = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto amp = [&] { return nonneg ? u(rng) : 2.0 * u(rng) - 1.0; };
  const TimeProfile profs[] = {TimeProfile::one(), TimeProfile::linear(), TimeProfile::step(0.02),
                               TimeProfile::pulse(0.01, 0.03)};
  DataRule r;
  const int n = 1 + static_cast<int>(u(rng) * 3.0);
  for (int i = 0; i < n; ++i) {
    const TimeProfile p = profs[static_cast<int>(u(rng) * 4.0) % 4];
    switch (static_cast<int>(u(rng) * 4.0) % 4) {
      case 0: r = r + DataRule::constant(amp(), p); break;
      case 1:
        if (far_simple)
          r = r + DataRule::ball(origin(1), 0.5 + u(rng), amp(), p);
        else
          r = r + DataRule::gaussian(make_point(2.0 * u(rng) - 1.0), 0.1 + 0.3 * u(rng), amp(), p);
        break;
      case 2: r = r + DataRule::ball(make_point(4.0 * u(rng) - 2.0), 0.2 + 0.5 * u(rng), amp(), p); break;
      default: r = r + DataRule::annulus(origin(1), 1.5, 1.5 + u(rng), amp(), p); break;
    }
  }
  return r;
}

KernelSpec random_kernel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  KernelSpec k = fractional_kernel(1, 0.3 + 1.5 * u(rng), 1.0, 2.0);
  k.params.alpha_floor = std::min(k.params.alpha, 0.3);
  switch (static_cast<int>(u(rng) * 4.0) % 4) {
    case 0: k.coefficient = CoefficientRule::constant(1.0 + u(rng)); break;
    case 1: k.coefficient = CoefficientRule::checkerboard(0.25, 1.0, 2.0); break;
    case 2: k.coefficient = CoefficientRule::time_oscillating(0.02, 1.0, 2.0); break;
    default: k.coefficient = CoefficientRule::random_piecewise(rng(), 0.2, 1.0, 2.0); break;
  }
  return k;
}

Outcome c3_comparison() {
  std::mt19937_64 rng(20240607);
  auto grid = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 16.0});
  int ordered = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    Scenario lo;
    lo.kernel = random_kernel(rng);
    lo.grid = grid;
    lo.initial = random_rule(rng, false);
    lo.exterior = random_rule(rng, false);
    lo.source = random_rule(rng, false);
    lo.schedule = TimeSchedule::uniform(0.0, 0.05, i % 2 ? 1e-4 : 2.5e-3);
    Scenario hi = lo;
    hi.initial = lo.initial + random_rule(rng, true);
    hi.exterior = lo.exterior + random_rule(rng, true);
    hi.source = lo.source + random_rule(rng, true);
    const auto r = comparison_check(lo, hi, {i % 2 ? Scheme::explicit_euler : Scheme::implicit_euler});
    ordered += r.ordered;
    worst = std::max(worst, r.max_violation);
  }
  double drift = 0.0;
  for (int i = 0; i < 10; ++i) {
    Scenario sc;
    sc.kernel = random_kernel(rng);
    sc.grid = grid;
    const double c = 4.0 * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    sc.initial = DataRule::constant(c);
    sc.exterior = DataRule::constant(c);
    sc.schedule = TimeSchedule::uniform(0.0, 0.05, 2.5e-3);
    const Solution s = solve(sc);
    drift = std::max({drift, std::abs(s.max_value() - c), std::abs(s.min_value() - c)});
  }
  return {ordered == 200 && drift <= 1e-12,
          fmt("%d/200 pairs ordered (worst violation %.2e); constant drift %.2e", ordered, worst, drift)};
}

SweepResult harnack_sweep() {
  static const SweepResult r = run_sweep(load("sweep.json"), 0);
  return r;
}

Outcome c4_harnack_sweep() {
  const SweepResult r = harnack_sweep();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  int finite = 0, total = 0;
  for (const auto& row : r.rows) {
    if (row.report.inequality != "harnack") continue;
    ++total;
    if (std::isfinite(row.report.constant) && row.report.constant > 0.0) ++finite;
    lo = std::min(lo, row.report.constant);
    hi = std::max(hi, row.report.constant);
  }
  return {total == 24 && finite == total && hi / lo <= 5.0,
          fmt("%d/%d finite Harnack constants in [%.4f, %.4f], max/min %.3f", finite, total, lo, hi, hi / lo)};
}

Outcome c5_weak_harnack() {
  const SweepResult r = harnack_sweep();
  int finite = 0, total = 0;
  double hi = 0.0;
  for (const auto& row : r.rows) {
    if (row.report.inequality != "weak_harnack") continue;
    ++total;
    if (std::isfinite(row.report.constant) && row.report.constant > 0.0) ++finite;
    hi = std::max(hi, row.report.constant);
  }
  // u = 1 everywhere: left = 1 + tail(1; 1, 0) = 1 + 2, right = 1.
  Scenario sc;
  sc.kernel = fractional_kernel(1, 1.0);
  sc.grid = make_grid({1, DomainShape::box, 4.5, 13.5, 0.25});
  sc.initial = DataRule::constant(1.0);
  sc.exterior = DataRule::constant(1.0);
  sc.schedule = TimeSchedule::uniform(0.0, 10.0, 0.125);
  const Report w = weak_harnack_ratio(solve(sc), 5.0, origin(1), 1.0);
  const bool ok = total == 24 && finite == total && std::abs(w.constant - 3.0) <= 1e-6;
  return {ok, fmt("%d/%d finite weak-Harnack ratios (max %.3f); u = 1 gives %.9f", finite, total, hi, w.constant)};
}

Outcome c6_local_boundedness() {
  double worst = 0.0;
  std::string vals;
  for (int s = 0; s < 3; ++s) {
    double prev = 0.0;
    for (double h : {1.0 / 64.0, 1.0 / 128.0}) {
      Scenario sc;
      sc.kernel = fractional_kernel(1, 1.0);
      sc.grid = make_grid({1, DomainShape::box, 1.0, 3.0, h});
      if (s == 0) {
        sc.initial = DataRule::gaussian(origin(1), 0.3, 1.0) + DataRule::constant(-0.4);
        sc.exterior = DataRule::constant(0.1) + DataRule::ball(make_point(-2.0), 0.5, -1.0);
      } else if (s == 1) {
        sc.initial = DataRule::gaussian(make_point(0.3), 0.2, 1.0) + DataRule::gaussian(make_point(-0.3), 0.2, -1.0);
        sc.exterior = DataRule::ball(make_point(1.5), 0.3, 1.0) + DataRule::ball(make_point(-2.5), 0.5, -2.0);
      } else {
        sc.exterior = DataRule::ball(make_point(2.0), 0.5, 1.0) + DataRule::ball(make_point(-2.0), 0.5, -1.0);
      }
      const double R = 0.25, T = 4.0 * R;
      sc.schedule = TimeSchedule::uniform(0.0, 2.0 * T, R / 32.0);
      const double c = locbd_ratio(solve(sc), T, origin(1), R).constant;
      if (prev > 0.0) {
        const double rel = std::abs(c / prev - 1.0);
        worst = std::max(worst, rel);
        vals += fmt(" %.1f%%", 100.0 * rel);
      }
      prev = c;
    }
  }
  return {worst <= 0.25, "relative change under refinement per scenario:" + vals};
}

Outcome c7_counterexample() {
  namespace bq = boost::math::quadrature;
  const double oracle = bq::gauss_kronrod<double, 31>::integrate([](double y) { return 2.0 / (y * y); }, 2.0, 3.0);
  const Counterexample ce = build_counterexample(CounterexampleSpec{});
  const Solution sol = solve(ce.scenario);
  std::vector<double> ts;
  for (int k = 4; k <= 12; ++k) ts.push_back(std::ldexp(1.0, -k));
  const auto lb = certify_lower_bound(sol, ce, ts);
  const bool inc = lower_bound_sequence_increasing(ce.delta, 0.2, 20, 60);
  const auto fr = certify_failure(sol, ce, {0.5}, 10, 30);
  const double growth = fr.lp_growth[0];
  const bool delta_ok = std::abs(ce.delta_star - oracle) / oracle <= 0.01;
  const bool margin_ok = ce.certificate_margin >= 0.5 * ce.delta_star - 1e-12;
  const bool ok = delta_ok && margin_ok && lb.holds && inc && fr.l1_cauchy && growth >= 1.5;
  return {ok, fmt("delta* %.6f (oracle %.6f), margin %.4f, lower bound k=4..12 %s, Hoelder sequence %s, "
                  "L1 partials %s, tail^1.5 growth k=10->30 %.3f (need >= 1.5)",
                  ce.delta_star, oracle, ce.certificate_margin, lb.holds ? "holds" : "fails",
                  inc ? "increasing" : "not increasing", fr.l1_cauchy ? "Cauchy" : "not Cauchy", growth)};
}

Outcome c8_axes() {
  const ExperimentConfig c = load("axes.json");
  const AxesResult r = run_axes(*c.axes, 0);
  double free_lo = std::numeric_limits<double>::infinity(), free_hi = 0.0;
  double inc_lo = std::numeric_limits<double>::infinity(), inc_hi = 0.0;
  for (const auto& row : r.rows) {
    const double f = row.report.summand("tail_free_constant");
    free_lo = std::min(free_lo, f);
    free_hi = std::max(free_hi, f);
    inc_lo = std::min(inc_lo, row.report.constant);
    inc_hi = std::max(inc_hi, row.report.constant);
  }
  const double up = free_hi / free_lo, var = inc_hi / inc_lo;
  return {up >= 10.0 && var <= 3.0,
          fmt("tail-free constant grows %.2fx (need >= 10), tail-inclusive varies %.2fx (need <= 3)", up, var)};
}

Outcome c9_tail_finiteness() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto grid = make_grid({1, DomainShape::box, 1.0, 3.0, 1.0 / 32.0});
  const KernelSpec k = fractional_kernel(1, 1.0);
  std::vector<double> times;
  for (int i = 0; i <= 8; ++i) times.push_back(0.05 * i / 8.0);
  double C = 0.0;
  int finite = 0;
  for (int s = 0; s < 100; ++s) {
    const DataRule inside = random_rule(rng, false) + DataRule::cosine(u(rng) - 0.5);
    const DataRule outside = random_rule(rng, false, true);
    std::vector<double> tails, norms;
    for (double t : times) {
      const Field f = Field::from_rule(grid, inside, outside, t);
      const double tl = tail(f, k.params, 0.5, origin(1));
      tails.push_back(tl * tl);
      norms.push_back(norm_V_squared(f, k, origin(1), 1.0, t));
    }
    const double a = time_integral(times, tails, times.front(), times.back());
    const double b = time_integral(times, norms, times.front(), times.back());
    if (std::isfinite(a) && std::isfinite(b) && b > 0.0) {
      ++finite;
      C = std::max(C, a / b);
    }
  }
  return {finite == 100 && std::isfinite(C) && C > 0.0,
          fmt("%d/100 samples finite; int tail^2 dt <= C int ||v||_V^2 dt with C = %.4f", finite, C)};
}

Outcome c10_iteration_lemma() {
  const auto geo = iterate_absorb(0.0, 0.0, 1.0, 1.0, 1.0, 0.5, 1.0, [](double) { return 1.0; });
  const auto zero = iterate_absorb(1.0, 0.0, 0.0, 1.0, 1.0, 0.25, 1.0, [](double) { return 0.0; });
  const double rho = 0.3;
  const auto blow = iterate_absorb(rho, 0.0, 0.0, 1.0, 1.0, 0.5, 1.0, [&](double r) { return rho / (1.0 - r); }, 200);
  const bool ok = geo.admissible && std::abs(geo.bound - 2.0) <= 1e-12 && geo.holds && zero.holds &&
                  zero.direct_value == 0.0 && blow.hypothesis_holds && blow.holds;
  return {ok, fmt("geometric bound %.15g, zero-function bound %.4g, blow-up bound %.4f >= f(1/2) = %.4f", geo.bound,
                  zero.bound, blow.bound, blow.direct_value)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c11_determinism() {
  const ExperimentConfig c = load("sweep.json");
  const fs::path base = fs::temp_directory_path() / "nlh_acceptance_c11";
  fs::remove_all(base);
  cmd_sweep(c, {(base / "a").string(), 1});
  cmd_sweep(c, {(base / "b").string(), 4});
  cmd_sweep(c, {(base / "c").string(), 0});
  const std::string a = slurp(base / "a" / "sweep.csv");
  const bool same = !a.empty() && a == slurp(base / "b" / "sweep.csv") && a == slurp(base / "c" / "sweep.csv");
  return {same, fmt("three sweeps (1, 4, all threads): sweep.csv %s (%zu bytes)", same ? "byte-identical" : "differs",
                    a.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11); all by default")->check(CLI::Range(0, 11));
  CLI11_PARSE(app, argc, argv);

  const std::function<Outcome()> checks[] = {c1_operator_consistency, c2_alpha_to_two, c3_comparison,
                                             c4_harnack_sweep,        c5_weak_harnack, c6_local_boundedness,
                                             c7_counterexample,       c8_axes,         c9_tail_finiteness,
                                             c10_iteration_lemma,     c11_determinism};
  bool all = true;
  for (int n = 1; n <= 11; ++n) {
    if (only != 0 && n != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s C%d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
