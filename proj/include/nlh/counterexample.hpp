#pragma once

#include <string>
#include <vector>

#include "nlh/solver.hpp"

namespace nlh {

/// Exterior data g(t, x) = delta f(t) + f'(t) 1_{B_3 \ B_2}(x) with f(t) = (log t)^{-2} on
/// (0, 1), zero before. Unit coefficient, zero initial data at t_start, zero source.
struct CounterexampleSpec {
  FracParams params{1, 1.0, 0.5, 1.0, 1.0};
  GridSpec grid{1, DomainShape::box, 1.0, 4.0, 1.0 / 32.0};
  double t_start = -1.0;
  double t_end = 0.5;
  /// Uniform step on [t_start, 0].
  double dt = 1.0 / 64.0;
  int k_max = 32;
  /// Steps per dyadic interval [2^{-k-1}, 2^{-k}].
  int substeps = 8;
  /// delta = delta_factor * delta_star.
  double delta_factor = 0.5;

  void validate() const;
};

double profile_f(double t);
double profile_df(double t);

/// (2 - alpha) int_{B_3 \ B_2} |x - y|^{-d - alpha} dy at every node of B_1, from the
/// discrete exterior load (ring cells plus analytic far field).
Vector annulus_loads(const FracParams& params, GridPtr grid);

/// Minimum of annulus_loads over the nodes of B_1.
double compute_delta(const FracParams& params, GridPtr grid);

struct Counterexample {
  CounterexampleSpec spec;
  Scenario scenario;
  double delta_star = 0.0;
  double delta = 0.0;
  /// Annulus loads at the nodes of B_1 (interior order).
  Vector loads;
  /// min over B_1 nodes of -(delta + (-L) 1_annulus) = load - delta.
  double certificate_margin = 0.0;
};

/// Throws PreconditionError when the subsolution certificate fails at delta.
Counterexample build_counterexample(const CounterexampleSpec& spec);

struct LowerBoundRow {
  double t = 0.0;
  double min_u = 0.0;
  double bound = 0.0;  ///< delta f(t)
  double tol = 0.0;
  double margin = 0.0;  ///< min_u - bound
  bool holds = true;
};

struct LowerBoundReport {
  std::vector<LowerBoundRow> rows;
  bool holds = true;
};

/// u(t, x) >= delta f(t) - tol on the B_1 nodes at the stored times nearest to `times`,
/// with tol = 10 dt delta sup f' over the step ending there.
LowerBoundReport certify_lower_bound(const Solution& s, const Counterexample& ce, const std::vector<double>& times);

struct MonotoneReport {
  bool holds = true;
  double worst_decrease = 0.0;
  double at_time = 0.0;
};

/// u nondecreasing in t on the B_1 nodes for stored times t >= 0.
MonotoneReport check_monotone_onset(const Solution& s, double tol = 1e-12);

/// delta f(2^{-k}) 2^{gamma k}.
double holder_lower_bound(double delta, double gamma, int k);

/// Tail of g at R = 1 around the origin in closed form:
/// (2 - alpha) (delta f |S| / alpha + f' |S| (2^{-alpha} - 3^{-alpha}) / alpha).
double counterexample_tail(const FracParams& params, double delta, double t);

struct FailureRow {
  int k = 0;
  double t = 0.0;
  double u0 = 0.0;
  double lower = 0.0;                ///< delta f(t_k)
  std::vector<double> quotient;      ///< u(t_k, 0) / t_k^gamma
  std::vector<double> lower_quotient;  ///< delta f(t_k) / t_k^gamma
  double tail = 0.0;                 ///< tail(u(t_k); 1, 0)
  double tail_closed = 0.0;
  double sandwich_lower = 0.0;       ///< c1 (f + f')
  double partial_L1 = 0.0;           ///< int_{t_k}^{t_end} tail dt
  std::vector<double> partial_Lp;    ///< int_{t_k}^{t_end} tail^{1 + gamma} dt
};

struct FailureReport {
  std::vector<double> gammas;
  std::vector<FailureRow> rows;
  double c1 = 0.0;
  bool sandwich_holds = true;
  bool l1_cauchy = true;             ///< increments of the L1 partials positive and decreasing
  std::vector<bool> lp_increasing;   ///< per gamma
  std::vector<double> lp_growth;     ///< per gamma, partial at k_hi over partial at k_lo
};

/// Whether holder_lower_bound(delta, gamma, k) strictly increases over k_lo..k_hi.
bool lower_bound_sequence_increasing(double delta, double gamma, int k_lo, int k_hi);

/// Requires at least 6 dyadic levels in [k_lo, k_hi] and stored times at every 2^{-k}.
FailureReport certify_failure(const Solution& s, const Counterexample& ce, const std::vector<double>& gammas, int k_lo,
                              int k_hi);

}  // namespace nlh
