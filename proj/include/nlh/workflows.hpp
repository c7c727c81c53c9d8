#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlh/config.hpp"
#include "nlh/verifier.hpp"

namespace nlh {

struct WorkflowOptions {
  std::string out_dir = "out";
  /// 0 selects the hardware concurrency.
  unsigned threads = 0;
};

unsigned resolve_threads(unsigned requested);

struct HeatOracleResult {
  double t = 0.0;
  double diffusivity = 1.0;
  double rel_error = 0.0;
};

/// L-infinity error on B_radius(0), relative to the peak of the exact solution, against the
/// Gaussian solution of u_t = kappa Delta u with kappa = 1 (d = 1) or pi / 2 (d = 2).
HeatOracleResult heat_oracle_error(const Solution& s, const HeatOracleConfig& oracle);

/// Runs one verifier op.
std::vector<Report> measure(const Solution& s, const MeasurementConfig& m);

/// CSV of reports: fixed leading columns, then the union of summand names.
std::string reports_csv(const std::vector<Report>& reports);
nlohmann::json reports_json(const std::vector<Report>& reports);

struct SweepRow {
  double alpha = 0.0;
  double R = 0.0;
  std::string coefficient;
  std::uint64_t seed = 0;
  Report report;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  nlohmann::json summary;
};

/// Cartesian sweep over alpha x R x coefficients (x seeds for random coefficients), rows
/// ordered by the parameter tuple regardless of thread count.
SweepResult run_sweep(const ExperimentConfig& c, unsigned threads);
std::string sweep_csv(const SweepResult& r);

struct CounterexampleResult {
  Counterexample ce;
  LowerBoundReport lower;
  MonotoneReport monotone;
  FailureReport failure;
  bool holder_lower_increasing = false;
  nlohmann::json summary;
};

CounterexampleResult run_counterexample(const CounterexampleConfig& c);
std::string counterexample_quotients_csv(const CounterexampleResult& r);
std::string counterexample_tails_csv(const CounterexampleResult& r);

struct AxesRow {
  double radius = 0.0;
  Report report;
};

struct AxesResult {
  std::vector<AxesRow> rows;
  nlohmann::json summary;
};

AxesResult run_axes(const AxesConfig& c, unsigned threads);
std::string axes_csv(const AxesResult& r);

/// Subcommands. Each writes its outputs and a resolved config into opts.out_dir.
void cmd_run(const ExperimentConfig& c, const WorkflowOptions& opts);
void cmd_verify(const ExperimentConfig& c, const WorkflowOptions& opts);
void cmd_sweep(const ExperimentConfig& c, const WorkflowOptions& opts);
/// Returns false when the lower-bound certificate fails beyond tolerance.
bool cmd_counterexample(const ExperimentConfig& c, const WorkflowOptions& opts);
void cmd_axes(const ExperimentConfig& c, const WorkflowOptions& opts);

}  // namespace nlh
