#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nlh/data_rule.hpp"
#include "nlh/discrete_operator.hpp"
#include "nlh/field.hpp"
#include "nlh/kernels.hpp"

namespace nlh {

/// Strictly increasing time nodes of a run.
struct TimeSchedule {
  std::vector<double> times;

  /// t_start, t_start + dt, ..., ending exactly at t_end.
  static TimeSchedule uniform(double t_start, double t_end, double dt);
  /// Uniform steps of size dt on [t_start, 0], a single step to 2^{-k_max}, then
  /// `substeps` equal steps on each dyadic interval [2^{-k-1}, 2^{-k}] up to t_end.
  /// Every 2^{-k} with 2^{-k} <= t_end is a node. Requires t_start < 0 < t_end < 1.
  static TimeSchedule graded(double t_start, double t_end, double dt, int k_max, int substeps);

  double start() const { return times.front(); }
  double end() const { return times.back(); }
  std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
  double max_step() const;
};

struct Scenario {
  KernelSpec kernel;
  GridPtr grid;
  /// Interior initial values; overridden by `initial_values` when present.
  DataRule initial;
  std::optional<Vector> initial_values;
  ExteriorRule exterior;
  DataRule source;
  TimeSchedule schedule;

  double t_start() const { return schedule.start(); }
  double t_end() const { return schedule.end(); }
  void validate() const;
};

enum class Scheme { explicit_euler, implicit_euler };

std::string to_string(Scheme s);

struct SolveOptions {
  Scheme scheme = Scheme::implicit_euler;
  double cfl_factor = 0.9;
  double linear_tolerance = 1e-10;
  std::size_t checkpoint_stride = 1;
};

struct StepDiagnostics {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double min = 0.0;
  double max = 0.0;
  double update_norm = 0.0;
};

struct Solution {
  SpaceTimeField field;
  std::vector<StepDiagnostics> diagnostics;
  /// Auditable notes on truncation of the exterior beyond the box.
  std::vector<std::string> truncation_ledger;
  KernelSpec kernel;
  Scheme scheme = Scheme::implicit_euler;
  std::shared_ptr<const DiscreteOperator> op;

  const Grid& grid() const { return field.grid(); }
  double min_value() const;
  double max_value() const;
  double min_interior_value() const;
};

Solution solve(const Scenario& scenario, const SolveOptions& options = {});

/// Weak-form residual |(d_t u, phi) + E(u, phi)/2 - (f, phi)| per step, over a fixed family of
/// tensor bumps. The energy form carries no factor 1/2 while the discrete equation is
/// d_t u = L u; on test functions supported in the domain the two differ by exactly 2.
struct ResidualReport {
  double max_residual = 0.0;
  std::vector<double> per_step;
  std::size_t test_functions = 0;
};

/// Bump family: 5 centres times 2 widths, supported in the domain.
std::vector<Vector> bump_family(const Grid& grid);

ResidualReport residual_check(const Solution& solution, const Scenario& scenario);

struct ComparisonResult {
  bool ordered = true;
  double max_violation = 0.0;
  double max_gap = 0.0;
  std::size_t first_violation_step = 0;
};

/// Solves both scenarios and checks u1 <= u2 + 1e-12 at every node and stored step.
ComparisonResult comparison_check(const Scenario& lower, const Scenario& upper, const SolveOptions& options = {});
/// Same check on two finished solutions.
ComparisonResult compare_solutions(const Solution& lower, const Solution& upper, double tol = 1e-12);

}  // namespace nlh
