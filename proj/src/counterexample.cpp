#include "nlh/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlh/tails.hpp"

namespace nlh {

namespace {

std::vector<std::size_t> unit_ball_slots(const Grid& g) {
  std::vector<std::size_t> out;
  for (std::size_t n : g.nodes_in_ball(origin(g.dim()), 1.0)) {
    const auto slot = g.interior_slot(n);
    if (slot >= 0) out.push_back(static_cast<std::size_t>(slot));
  }
  return out;
}

DataRule annulus_indicator(int dim, TimeProfile profile = {}) {
  return DataRule::annulus(origin(dim), 2.0, 3.0, 1.0, profile);
}

std::size_t stored_index(const SpaceTimeField& u, double t) {
  const std::size_t k = u.nearest(t);
  if (std::abs(u.times()[k] - t) > 1e-12 * std::max(std::abs(t), 1e-300))
    throw PreconditionError("no stored time at t = " + std::to_string(t));
  return k;
}

std::size_t origin_node(const Grid& g) { return g.dim() == 1 ? g.node_at(0) : g.node_at(0, 0); }

}  // namespace

void CounterexampleSpec::validate() const {
  params.validate();
  if (grid.dim != params.dim) throw PreconditionError("counterexample grid and kernel dimensions differ");
  if (grid.h > 1.0 / 16.0 + 1e-15) throw PreconditionError("grid too coarse: need at least 16 nodes per unit length");
  if (grid.r_trunc < 3.0) throw PreconditionError("truncation box must cover B_3");
  if (grid.half_width < 1.0) throw PreconditionError("domain must contain B_1");
  const double reach = grid.shape == DomainShape::box ? grid.half_width * std::sqrt(double(grid.dim)) : grid.half_width;
  if (reach > 2.0) throw PreconditionError("domain must stay inside B_2");
  if (!(t_start < 0.0 && t_end > 0.0 && t_end < 1.0)) throw PreconditionError("need t_start < 0 < t_end < 1");
  if (!(delta_factor > 0.0 && delta_factor <= 1.0)) throw PreconditionError("delta_factor must lie in (0, 1]");
}

double profile_f(double t) { return TimeProfile::log_sq()(t); }
double profile_df(double t) { return TimeProfile::log_sq_derivative()(t); }

Vector annulus_loads(const FracParams& params, GridPtr grid) {
  KernelSpec spec = fractional_kernel(params.dim, params.alpha, params.lambda, params.Lambda);
  spec.params.alpha_floor = params.alpha_floor;
  const DiscreteOperator op = assemble(spec, grid);
  const Vector load = op.exterior_load(annulus_indicator(params.dim), 0.0);
  const auto slots = unit_ball_slots(*grid);
  Vector out(static_cast<Eigen::Index>(slots.size()));
  for (std::size_t i = 0; i < slots.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = load[static_cast<Eigen::Index>(slots[i])];
  return out;
}

double compute_delta(const FracParams& params, GridPtr grid) {
  const Vector loads = annulus_loads(params, grid);
  if (loads.size() == 0) throw PreconditionError("no grid node inside B_1");
  const double d = loads.minCoeff();
  if (!(d > 0.0)) throw NumericalError("annulus load is not positive", 0);
  return d;
}

Counterexample build_counterexample(const CounterexampleSpec& spec) {
  spec.validate();
  Counterexample ce;
  ce.spec = spec;
  GridPtr grid = make_grid(spec.grid);
  ce.loads = annulus_loads(spec.params, grid);
  ce.delta_star = ce.loads.minCoeff();
  ce.delta = spec.delta_factor * ce.delta_star;
  ce.certificate_margin = (ce.loads.array() - ce.delta).minCoeff();
  if (ce.certificate_margin < (1.0 - spec.delta_factor) * ce.delta_star - 1e-12)
    throw PreconditionError("subsolution certificate fails");

  const int d = spec.params.dim;
  Scenario& sc = ce.scenario;
  sc.kernel = fractional_kernel(d, spec.params.alpha, spec.params.lambda, spec.params.Lambda);
  sc.kernel.params.alpha_floor = spec.params.alpha_floor;
  sc.grid = grid;
  sc.initial = DataRule::zero();
  sc.exterior = DataRule::constant(ce.delta, TimeProfile::log_sq()) +
                annulus_indicator(d, TimeProfile::log_sq_derivative());
  sc.source = DataRule::zero();
  sc.schedule = TimeSchedule::graded(spec.t_start, spec.t_end, spec.dt, spec.k_max, spec.substeps);
  return ce;
}

LowerBoundReport certify_lower_bound(const Solution& s, const Counterexample& ce, const std::vector<double>& times) {
  const auto& u = s.field;
  const auto slots = unit_ball_slots(s.grid());
  const auto& interior = s.grid().interior_nodes();
  LowerBoundReport rep;
  for (double t : times) {
    const std::size_t k = u.nearest(t);
    const double tk = u.times()[k];
    const Field& f = u.at(k);
    LowerBoundRow row;
    row.t = tk;
    row.min_u = std::numeric_limits<double>::infinity();
    for (std::size_t sl : slots) row.min_u = std::min(row.min_u, f[interior[sl]]);
    row.bound = ce.delta * profile_f(tk);
    if (k > 0) {
      const double tp = u.times()[k - 1];
      const double sup_df = std::max({profile_df(tp), profile_df(0.5 * (tp + tk)), profile_df(tk)});
      row.tol = 10.0 * (tk - tp) * ce.delta * sup_df;
    }
    row.margin = row.min_u - row.bound;
    row.holds = row.margin >= -row.tol;
    rep.holds = rep.holds && row.holds;
    rep.rows.push_back(row);
  }
  return rep;
}

MonotoneReport check_monotone_onset(const Solution& s, double tol) {
  const auto& u = s.field;
  const auto& g = s.grid();
  const auto nodes = g.nodes_in_ball(origin(g.dim()), 1.0);
  MonotoneReport rep;
  for (std::size_t k = 1; k < u.size(); ++k) {
    if (u.times()[k - 1] < 0.0) continue;
    for (std::size_t n : nodes) {
      const double dec = u.at(k - 1)[n] - u.at(k)[n];
      if (dec > rep.worst_decrease) {
        rep.worst_decrease = dec;
        rep.at_time = u.times()[k];
      }
    }
  }
  rep.holds = rep.worst_decrease <= tol;
  return rep;
}

double holder_lower_bound(double delta, double gamma, int k) {
  const double t = std::ldexp(1.0, -k);
  return delta * profile_f(t) / std::pow(t, gamma);
}

bool lower_bound_sequence_increasing(double delta, double gamma, int k_lo, int k_hi) {
  for (int k = k_lo; k < k_hi; ++k)
    if (!(holder_lower_bound(delta, gamma, k + 1) > holder_lower_bound(delta, gamma, k))) return false;
  return true;
}

double counterexample_tail(const FracParams& params, double delta, double t) {
  const double a = params.alpha;
  const double w = sphere_measure(params.dim);
  const double ann = w * (std::pow(2.0, -a) - std::pow(3.0, -a)) / a;
  return (2.0 - a) * (delta * profile_f(t) * w / a + profile_df(t) * ann);
}

FailureReport certify_failure(const Solution& s, const Counterexample& ce, const std::vector<double>& gammas, int k_lo,
                              int k_hi) {
  if (k_hi - k_lo + 1 < 6) throw PreconditionError("k range must span at least 6 dyadic levels");
  if (k_lo < 1) throw PreconditionError("k range must start at k >= 1");
  for (double g : gammas)
    if (!(g > 0.0)) throw PreconditionError("gamma must be positive");
  const auto& u = s.field;
  const auto& p = s.kernel.params;
  const double t_end = u.times().back();
  const std::size_t first = stored_index(u, std::ldexp(1.0, -k_hi));

  const TailOperator tail_op(u.at(0).grid_ptr(), p.alpha, 1.0, origin(p.dim));
  std::vector<double> times, tails;
  for (std::size_t k = first; k < u.size(); ++k) {
    times.push_back(u.times()[k]);
    tails.push_back(tail_op(u.at(k), FarPart::absolute));
  }

  FailureReport rep;
  rep.gammas = gammas;
  const double a = p.alpha;
  const double ann = (2.0 - a) * sphere_measure(p.dim) * (std::pow(2.0, -a) - std::pow(3.0, -a)) / a;
  rep.c1 = ann * std::min(ce.delta / ann, 1.0);
  const std::size_t o = origin_node(s.grid());

  for (int k = k_lo; k <= k_hi; ++k) {
    const double tk = std::ldexp(1.0, -k);
    const std::size_t idx = stored_index(u, tk);
    FailureRow row;
    row.k = k;
    row.t = tk;
    row.u0 = u.at(idx)[o];
    row.lower = ce.delta * profile_f(tk);
    for (double g : gammas) {
      row.quotient.push_back(row.u0 / std::pow(tk, g));
      row.lower_quotient.push_back(row.lower / std::pow(tk, g));
    }
    row.tail = tails[idx - first];
    row.tail_closed = counterexample_tail(p, ce.delta, tk);
    row.sandwich_lower = rep.c1 * (profile_f(tk) + profile_df(tk));
    if (row.tail < row.sandwich_lower * (1.0 - 1e-9)) rep.sandwich_holds = false;
    if (tk < t_end) {
      row.partial_L1 = time_integral(times, tails, tk, t_end);
      for (double g : gammas) {
        std::vector<double> pw(tails.size());
        for (std::size_t i = 0; i < tails.size(); ++i) pw[i] = std::pow(tails[i], 1.0 + g);
        row.partial_Lp.push_back(time_integral(times, pw, tk, t_end));
      }
    } else {
      row.partial_Lp.assign(gammas.size(), 0.0);
    }
    rep.rows.push_back(std::move(row));
  }

  double prev_inc = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double inc = rep.rows[i].partial_L1 - rep.rows[i - 1].partial_L1;
    if (!(inc > 0.0 && inc < prev_inc)) rep.l1_cauchy = false;
    prev_inc = inc;
  }
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    bool inc = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
      if (!(rep.rows[i].partial_Lp[g] > rep.rows[i - 1].partial_Lp[g])) inc = false;
    rep.lp_increasing.push_back(inc);
    const double lo = rep.rows.front().partial_Lp[g];
    rep.lp_growth.push_back(lo > 0.0 ? rep.rows.back().partial_Lp[g] / lo : std::numeric_limits<double>::infinity());
  }
  return rep;
}

}  // namespace nlh
