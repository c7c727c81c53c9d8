#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlh/counterexample.hpp"
#include "nlh/solver.hpp"

namespace nlh {

constexpr int kSchemaVersion = 1;

struct ScheduleConfig {
  std::string kind = "uniform";  ///< uniform | graded
  double dt = 1.0 / 64.0;
  int k_max = 20;
  int substeps = 8;
};

struct ScenarioConfig {
  double t_start = 0.0;
  double t_end = 1.0;
  DataRule initial;
  DataRule exterior;
  DataRule source;
  ScheduleConfig schedule;
  Scheme scheme = Scheme::implicit_euler;
  double cfl_factor = 0.9;
  std::size_t stride = 1;
};

struct MeasurementConfig {
  /// harnack | harnack_tails | weak_harnack | local_boundedness | holder | axes_harnack
  std::string op = "harnack";
  double t0 = 0.0;
  Point x0 = Point::Zero(1);
  double R = 0.25;
  std::vector<double> gammas{0.1, 0.25, 0.5};
  double epsilon = 0.5;
};

struct SweepConfig {
  std::vector<double> alpha;
  std::vector<double> R;
  std::vector<CoefficientRule> coefficients;
  /// Seeds applied to random_piecewise coefficients; other kinds run once.
  std::vector<std::uint64_t> seeds{0};
  std::vector<std::string> inequalities{"harnack", "weak_harnack"};
  Point x0 = Point::Zero(1);
  /// dt = R^alpha / steps_per_cylinder; t0 = t_start + (4R)^alpha; t_end = t0 + (4R)^alpha.
  int steps_per_cylinder = 16;
  std::vector<double> gammas{0.1, 0.25, 0.5};
  double epsilon = 0.5;
};

struct CounterexampleConfig {
  CounterexampleSpec spec;
  std::vector<int> lower_bound_k{4, 5, 6, 7, 8, 9, 10, 11, 12};
  int k_lo = 4;
  int k_hi = 30;
  std::vector<double> gammas{0.1, 0.25, 0.5, 1.0};
  double holder_gamma = 0.2;
  int holder_k_lo = 20;
  int holder_k_hi = 40;
};

struct AxesConfig {
  double alpha = 0.5;
  GridSpec grid{2, DomainShape::box, 1.0, 3.0, 2.0 / 48.0};
  double R = 0.25;
  Point x0 = Point::Zero(2);
  Point ball_center = Point::Zero(2);
  std::vector<double> radii{0.25, 0.125, 0.0625};
  int steps_per_cylinder = 16;
};

struct HeatOracleConfig {
  double sigma = 0.1;
  double radius = 0.5;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  KernelSpec kernel;
  GridSpec grid;
  ScenarioConfig scenario;
  std::vector<MeasurementConfig> measurements;
  std::optional<SweepConfig> sweep;
  std::optional<CounterexampleConfig> counterexample;
  std::optional<AxesConfig> axes;
  std::optional<HeatOracleConfig> heat_oracle;
  std::uint64_t seed = 0;
};

/// Schema-validated parse; unknown keys and ill-typed values raise ConfigError naming the key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Fully resolved form: every parameter explicit, parseable by parse_config.
nlohmann::json to_json(const ExperimentConfig& c);

nlohmann::json to_json(const DataRule& rule);
nlohmann::json to_json(const CoefficientRule& rule);
nlohmann::json to_json(const KernelSpec& spec);

/// Scenario of the main block (kernel, grid, data, schedule).
Scenario make_scenario(const ExperimentConfig& c);
SolveOptions make_solve_options(const ExperimentConfig& c);

}  // namespace nlh
