#include "nlh/workflows.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "nlh/report_io.hpp"

namespace nlh {

using nlohmann::json;

namespace {

/// Short label for a parameter value used in column and key names.
std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Summand columns of report CSVs, in output order.
const std::vector<std::string> kSummandColumns{"sup",     "inf",     "mean",     "rms",       "tail",
                                               "tail_pos", "tail_neg", "sup_pos", "rms_pos",   "quotient",
                                               "gamma",   "epsilon", "pairs",    "tail_axes", "tail_free_constant"};

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string flag(const Report& r) { return r.degenerate ? "degenerate" : (r.infinite ? "infinite" : ""); }

std::vector<std::string> summand_cells(const Report& r) {
  std::vector<std::string> out;
  for (const auto& name : kSummandColumns) {
    std::string cell;
    for (const auto& [k, v] : r.summands)
      if (k == name) cell = format_double(v);
    out.push_back(cell);
  }
  return out;
}

std::string provenance_value(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.provenance)
    if (k == key) return v;
  return "";
}

json summarize(const std::vector<Report>& reports) {
  std::map<std::string, std::vector<const Report*>> by;
  for (const auto& r : reports) by[r.inequality].push_back(&r);
  json out = json::object();
  for (const auto& [name, list] : by) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::size_t inf = 0, deg = 0, fin = 0;
    for (const Report* r : list) {
      if (r->degenerate) ++deg;
      else if (r->infinite) ++inf;
      else {
        ++fin;
        lo = std::min(lo, r->constant);
        hi = std::max(hi, r->constant);
      }
    }
    json s{{"rows", list.size()}, {"finite", fin}, {"infinite", inf}, {"degenerate", deg}};
    if (fin > 0) {
      s["min_constant"] = json_number(lo);
      s["max_constant"] = json_number(hi);
      s["max_over_min"] = json_number(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    }
    out[name] = s;
  }
  return out;
}

void write_resolved(const ExperimentConfig& c, const WorkflowOptions& opts) {
  write_json((std::filesystem::path(opts.out_dir) / "resolved_config.json").string(), to_json(c));
}

std::string out_path(const WorkflowOptions& opts, const std::string& name) {
  return (std::filesystem::path(opts.out_dir) / name).string();
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

HeatOracleResult heat_oracle_error(const Solution& s, const HeatOracleConfig& oracle) {
  const auto& u = s.field;
  const int d = s.kernel.params.dim;
  HeatOracleResult r;
  r.diffusivity = d == 1 ? 1.0 : std::numbers::pi / 2.0;
  r.t = u.times().back() - u.times().front();
  const double var = oracle.sigma * oracle.sigma + 2.0 * r.diffusivity * r.t;
  const double amp = std::pow(oracle.sigma * oracle.sigma / var, 0.5 * d);
  const Field& f = u.at(u.size() - 1);
  double err = 0.0, peak = 0.0;
  for (std::size_t n : s.grid().nodes_in_ball(origin(d), oracle.radius)) {
    const double e = amp * std::exp(-s.grid().coord(n).squaredNorm() / (2.0 * var));
    err = std::max(err, std::abs(f[n] - e));
    peak = std::max(peak, e);
  }
  if (!(peak > 0.0)) throw PreconditionError("heat oracle ball holds no node");
  r.rel_error = err / peak;
  return r;
}

std::vector<Report> measure(const Solution& s, const MeasurementConfig& m) {
  if (m.op == "harnack") return {harnack_quotient(s, m.t0, m.x0, m.R)};
  if (m.op == "harnack_tails") return {harnack_with_tails(s, m.t0, m.x0, m.R)};
  if (m.op == "weak_harnack") return {weak_harnack_ratio(s, m.t0, m.x0, m.R)};
  if (m.op == "local_boundedness") return {locbd_ratio(s, m.t0, m.x0, m.R)};
  if (m.op == "holder") return holder_report(s, m.t0, m.x0, m.R, m.gammas, m.epsilon);
  if (m.op == "axes_harnack") return {axes_harnack(s, m.t0, m.x0, m.R)};
  throw ConfigError("op", "unknown inequality '" + m.op + "'");
}

std::string reports_csv(const std::vector<Report>& reports) {
  std::vector<std::string> header{"inequality", "t0", "x0", "R", "left", "right", "constant", "flag"};
  header.insert(header.end(), kSummandColumns.begin(), kSummandColumns.end());
  CsvTable t(header);
  for (const auto& r : reports) {
    std::vector<std::string> row{r.inequality,
                                 provenance_value(r, "t0"),
                                 provenance_value(r, "x0"),
                                 provenance_value(r, "R"),
                                 format_double(r.left),
                                 format_double(r.right),
                                 format_double(r.constant),
                                 flag(r)};
    const auto cells = summand_cells(r);
    row.insert(row.end(), cells.begin(), cells.end());
    t.add_row(std::move(row));
  }
  return t.str();
}

json reports_json(const std::vector<Report>& reports) {
  json a = json::array();
  for (const auto& r : reports) {
    json s = json::object(), p = json::object();
    for (const auto& [k, v] : r.summands) s[k] = json_number(v);
    for (const auto& [k, v] : r.provenance) p[k] = v;
    a.push_back({{"inequality", r.inequality},
                 {"left", json_number(r.left)},
                 {"right", json_number(r.right)},
                 {"constant", json_number(r.constant)},
                 {"degenerate", r.degenerate},
                 {"infinite", r.infinite},
                 {"summands", s},
                 {"provenance", p}});
  }
  return a;
}

SweepResult run_sweep(const ExperimentConfig& c, unsigned threads) {
  if (!c.sweep) throw ConfigError("sweep", "missing sweep block");
  const SweepConfig& w = *c.sweep;
  if (c.kernel.is_axes()) throw ConfigError("kernel.structure", "sweeps need a density kernel");

  struct Job {
    double alpha, R;
    CoefficientRule coefficient;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double a : w.alpha)
    for (double R : w.R)
      for (const auto& co : w.coefficients) {
        if (co.kind() == CoefficientKind::random_piecewise) {
          for (auto sd : w.seeds)
            jobs.push_back({a, R, CoefficientRule::random_piecewise(sd, co.cell_size(), co.low(), co.high()), sd});
        } else {
          jobs.push_back({a, R, co, co.seed()});
        }
      }

  std::vector<std::vector<SweepRow>> out(jobs.size());
  parallel_for(jobs.size(), resolve_threads(threads), [&](std::size_t i) {
    const Job& job = jobs[i];
    Scenario sc = make_scenario(c);
    sc.kernel.params.alpha = job.alpha;
    sc.kernel.params.alpha_floor = std::min(c.kernel.params.alpha_floor, job.alpha);
    sc.kernel.coefficient = job.coefficient;
    try {
      sc.kernel.validate();
    } catch (const PreconditionError& e) {
      throw ConfigError("sweep.coefficients", e.what());
    }
    const double span = std::pow(4.0 * job.R, job.alpha);
    const double t0 = c.scenario.t_start + span;
    sc.schedule = TimeSchedule::uniform(c.scenario.t_start, t0 + span, std::pow(job.R, job.alpha) / w.steps_per_cylinder);
    const Solution s = solve(sc, make_solve_options(c));
    for (const auto& ineq : w.inequalities) {
      MeasurementConfig m;
      m.op = ineq;
      m.t0 = t0;
      m.x0 = w.x0;
      m.R = job.R;
      m.gammas = w.gammas;
      m.epsilon = w.epsilon;
      for (auto& r : measure(s, m)) out[i].push_back({job.alpha, job.R, to_string(job.coefficient.kind()), job.seed, r});
    }
  });

  SweepResult res;
  std::vector<Report> all;
  for (auto& v : out)
    for (auto& row : v) {
      all.push_back(row.report);
      res.rows.push_back(std::move(row));
    }
  res.summary = {{"jobs", jobs.size()}, {"inequalities", summarize(all)}};
  return res;
}

std::string sweep_csv(const SweepResult& r) {
  std::vector<std::string> header{"alpha", "R", "coefficient", "coefficient_seed", "inequality",
                                  "left",  "right", "constant", "flag"};
  header.insert(header.end(), kSummandColumns.begin(), kSummandColumns.end());
  CsvTable t(header);
  for (const auto& row : r.rows) {
    std::vector<std::string> cells{format_double(row.alpha), format_double(row.R), row.coefficient,
                                   std::to_string(row.seed), row.report.inequality, format_double(row.report.left),
                                   format_double(row.report.right), format_double(row.report.constant),
                                   flag(row.report)};
    const auto s = summand_cells(row.report);
    cells.insert(cells.end(), s.begin(), s.end());
    t.add_row(std::move(cells));
  }
  return t.str();
}

CounterexampleResult run_counterexample(const CounterexampleConfig& c) {
  CounterexampleResult r;
  r.ce = build_counterexample(c.spec);
  const Solution s = solve(r.ce.scenario);
  std::vector<double> times;
  for (int k : c.lower_bound_k) times.push_back(std::ldexp(1.0, -k));
  r.lower = certify_lower_bound(s, r.ce, times);
  r.monotone = check_monotone_onset(s);
  r.failure = certify_failure(s, r.ce, c.gammas, c.k_lo, c.k_hi);
  r.holder_lower_increasing = lower_bound_sequence_increasing(r.ce.delta, c.holder_gamma, c.holder_k_lo, c.holder_k_hi);

  json growth = json::object();
  for (std::size_t g = 0; g < c.gammas.size(); ++g)
    growth[label(c.gammas[g])] = {{"increasing", r.failure.lp_increasing[g]},
                                          {"growth_k_lo_to_k_hi", json_number(r.failure.lp_growth[g])}};
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& row : r.lower.rows) min_margin = std::min(min_margin, row.margin + row.tol);
  r.summary = {{"delta_star", r.ce.delta_star},
               {"delta", r.ce.delta},
               {"certificate_margin", r.ce.certificate_margin},
               {"lower_bound_holds", r.lower.holds},
               {"lower_bound_min_slack", json_number(min_margin)},
               {"monotone_onset", r.monotone.holds},
               {"monotone_worst_decrease", r.monotone.worst_decrease},
               {"tail_sandwich_holds", r.failure.sandwich_holds},
               {"tail_sandwich_c1", r.failure.c1},
               {"l1_partials_cauchy", r.failure.l1_cauchy},
               {"lp_partials", growth},
               {"holder_lower_bound_increasing", r.holder_lower_increasing},
               {"holder_gamma", c.holder_gamma},
               {"holder_k_range", {c.holder_k_lo, c.holder_k_hi}}};
  return r;
}

std::string counterexample_quotients_csv(const CounterexampleResult& r) {
  std::vector<std::string> header{"k", "t", "u0", "delta_f"};
  for (double g : r.failure.gammas) header.push_back("q_" + label(g));
  for (double g : r.failure.gammas) header.push_back("lower_q_" + label(g));
  CsvTable t(header);
  for (const auto& row : r.failure.rows) {
    std::vector<std::string> cells{std::to_string(row.k), format_double(row.t), format_double(row.u0),
                                   format_double(row.lower)};
    for (double v : row.quotient) cells.push_back(format_double(v));
    for (double v : row.lower_quotient) cells.push_back(format_double(v));
    t.add_row(std::move(cells));
  }
  return t.str();
}

std::string counterexample_tails_csv(const CounterexampleResult& r) {
  std::vector<std::string> header{"k", "t", "tail", "tail_closed_form", "sandwich_lower", "partial_L1"};
  for (double g : r.failure.gammas) header.push_back("partial_L" + label(1.0 + g));
  CsvTable t(header);
  for (const auto& row : r.failure.rows) {
    std::vector<std::string> cells{std::to_string(row.k),        format_double(row.t),
                                   format_double(row.tail),      format_double(row.tail_closed),
                                   format_double(row.sandwich_lower), format_double(row.partial_L1)};
    for (double v : row.partial_Lp) cells.push_back(format_double(v));
    t.add_row(std::move(cells));
  }
  return t.str();
}

AxesResult run_axes(const AxesConfig& c, unsigned threads) {
  const GridPtr grid = make_grid(c.grid);
  std::vector<Report> reports(c.radii.size());
  parallel_for(c.radii.size(), resolve_threads(threads), [&](std::size_t i) {
    Scenario sc;
    sc.kernel = axes_kernel(c.alpha);
    sc.grid = grid;
    sc.initial = DataRule::zero();
    sc.exterior = DataRule::ball(c.ball_center, c.radii[i]);
    sc.source = DataRule::zero();
    const double span = std::pow(4.0 * c.R, c.alpha);
    sc.schedule = TimeSchedule::uniform(0.0, 2.0 * span, std::pow(c.R, c.alpha) / c.steps_per_cylinder);
    const Solution s = solve(sc);
    reports[i] = axes_harnack(s, span, c.x0, c.R);
  });
  AxesResult res;
  for (std::size_t i = 0; i < c.radii.size(); ++i) res.rows.push_back({c.radii[i], reports[i]});

  const double free_first = res.rows.front().report.summand("tail_free_constant");
  const double free_last = res.rows.back().report.summand("tail_free_constant");
  bool increasing = true;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i].report;
    if (i > 0 && !(r.summand("tail_free_constant") > res.rows[i - 1].report.summand("tail_free_constant")))
      increasing = false;
    lo = std::min(lo, r.constant);
    hi = std::max(hi, r.constant);
  }
  res.summary = {{"tail_free_increasing", increasing},
                 {"tail_free_growth", json_number(free_last / free_first)},
                 {"tail_inclusive_min", json_number(lo)},
                 {"tail_inclusive_max", json_number(hi)},
                 {"tail_inclusive_spread", json_number(hi / lo)}};
  return res;
}

std::string axes_csv(const AxesResult& r) {
  CsvTable t({"radius", "sup", "inf", "tail_axes", "tail_free_constant", "tail_inclusive_constant"});
  for (const auto& row : r.rows) {
    const auto& rep = row.report;
    t.add_row({format_double(row.radius), format_double(rep.summand("sup")), format_double(rep.summand("inf")),
               format_double(rep.summand("tail_axes")), format_double(rep.summand("tail_free_constant")),
               format_double(rep.constant)});
  }
  return t.str();
}

void cmd_run(const ExperimentConfig& c, const WorkflowOptions& opts) {
  write_resolved(c, opts);
  const Scenario sc = make_scenario(c);
  const Solution s = solve(sc, make_solve_options(c));
  write_csv(s.field, out_path(opts, "solution.csv"));
  json steps = json::array();
  for (const auto& d : s.diagnostics)
    steps.push_back({{"step", d.step}, {"t", d.t}, {"dt", d.dt}, {"min", d.min}, {"max", d.max},
                     {"update_norm", d.update_norm}});
  json diag{{"steps", s.diagnostics.size()},
            {"t_start", sc.t_start()},
            {"t_end", sc.t_end()},
            {"min", s.min_value()},
            {"max", s.max_value()},
            {"min_interior", s.min_interior_value()},
            {"scheme", to_string(s.scheme)},
            {"truncation_ledger", s.truncation_ledger},
            {"step_diagnostics", steps}};
  if (c.heat_oracle) {
    const auto h = heat_oracle_error(s, *c.heat_oracle);
    diag["heat_oracle"] = {{"t", h.t}, {"diffusivity", h.diffusivity}, {"rel_error", h.rel_error},
                           {"sigma", c.heat_oracle->sigma}, {"radius", c.heat_oracle->radius}};
  }
  write_json(out_path(opts, "diagnostics.json"), diag);
}

void cmd_verify(const ExperimentConfig& c, const WorkflowOptions& opts) {
  if (c.measurements.empty()) throw ConfigError("measurements", "verify needs at least one measurement");
  write_resolved(c, opts);
  const Solution s = solve(make_scenario(c), make_solve_options(c));
  std::vector<Report> reports;
  for (const auto& m : c.measurements)
    for (auto& r : measure(s, m)) reports.push_back(std::move(r));
  write_file_atomic(out_path(opts, "reports.csv"), reports_csv(reports));
  write_json(out_path(opts, "reports.json"), {{"reports", reports_json(reports)}, {"summary", summarize(reports)}});
}

void cmd_sweep(const ExperimentConfig& c, const WorkflowOptions& opts) {
  if (!c.sweep) throw ConfigError("sweep", "missing sweep block");
  write_resolved(c, opts);
  const SweepResult r = run_sweep(c, opts.threads);
  write_file_atomic(out_path(opts, "sweep.csv"), sweep_csv(r));
  write_json(out_path(opts, "sweep_summary.json"), r.summary);
}

bool cmd_counterexample(const ExperimentConfig& c, const WorkflowOptions& opts) {
  if (!c.counterexample) throw ConfigError("counterexample", "missing counterexample block");
  write_resolved(c, opts);
  const CounterexampleResult r = run_counterexample(*c.counterexample);
  write_file_atomic(out_path(opts, "counterexample_quotients.csv"), counterexample_quotients_csv(r));
  write_file_atomic(out_path(opts, "counterexample_tails.csv"), counterexample_tails_csv(r));
  CsvTable lb({"t", "min_u", "delta_f", "tol", "margin", "holds"});
  for (const auto& row : r.lower.rows)
    lb.add_row({format_double(row.t), format_double(row.min_u), format_double(row.bound), format_double(row.tol),
                format_double(row.margin), row.holds ? "1" : "0"});
  lb.write(out_path(opts, "counterexample_lower_bound.csv"));
  write_json(out_path(opts, "counterexample_summary.json"), r.summary);
  return r.lower.holds;
}

void cmd_axes(const ExperimentConfig& c, const WorkflowOptions& opts) {
  if (!c.axes) throw ConfigError("axes", "missing axes block");
  write_resolved(c, opts);
  const AxesResult r = run_axes(*c.axes, opts.threads);
  write_file_atomic(out_path(opts, "axes.csv"), axes_csv(r));
  write_json(out_path(opts, "axes_summary.json"), r.summary);
}

}  // namespace nlh
