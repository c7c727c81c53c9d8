#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nlh/common.hpp"

namespace nlh {

/// Order, floor and ellipticity bounds of a jump kernel comparable to
/// (2 - alpha) |x - y|^{-d - alpha}.
struct FracParams {
  int dim = 1;
  double alpha = 1.0;
  double alpha_floor = 0.5;
  double lambda = 1.0;
  double Lambda = 1.0;

  void validate() const;
};

enum class CoefficientKind { constant, checkerboard, time_oscillating, random_piecewise, custom };

std::string to_string(CoefficientKind kind);

/// Bounded measurable coefficient a(t, x, y) from a small parametric family.
///
/// Every family is separable, a(t, x, y) = time_factor(t) * spatial(x, y), and
/// spatial(x, y) = spatial(y, x) holds exactly by construction. The `custom`
/// kind exists so tests can feed deliberately broken coefficients to the
/// condition checkers; it is time independent.
class CoefficientRule {
 public:
  using SpatialFn = std::function<double(const Point&, const Point&)>;

  static CoefficientRule constant(double value);
  /// `high` when the cell parities of x and y differ, `low` otherwise.
  static CoefficientRule checkerboard(double cell_size, double low, double high);
  /// low + (high - low) * (1 + sin(2 pi t / period)) / 2, independent of x and y.
  static CoefficientRule time_oscillating(double period, double low, double high);
  /// Per-cell values drawn from U[low, high] by a hash of (seed, cell); a(x, y) is
  /// the mean of the two cell values.
  static CoefficientRule random_piecewise(std::uint64_t seed, double cell_size, double low,
                                          double high);
  static CoefficientRule custom(SpatialFn fn, double low, double high);

  double operator()(double t, const Point& x, const Point& y) const {
    return time_factor(t) * spatial(x, y);
  }
  double time_factor(double t) const;
  double spatial(const Point& x, const Point& y) const;

  /// Coefficient used for interactions with the analytic far field beyond the
  /// truncation box: the spatial mean of the family.
  double far_spatial() const;

  bool time_dependent() const { return kind_ == CoefficientKind::time_oscillating; }
  bool spatially_constant() const {
    return kind_ == CoefficientKind::constant || kind_ == CoefficientKind::time_oscillating;
  }
  CoefficientKind kind() const { return kind_; }
  double low() const { return low_; }
  double high() const { return high_; }
  double cell_size() const { return cell_; }
  double period() const { return period_; }
  std::uint64_t seed() const { return seed_; }

  /// Cell value of the random-piecewise family at the given cell multi-index.
  double cell_value(const Point& x) const;

 private:
  CoefficientKind kind_ = CoefficientKind::constant;
  double low_ = 1.0;
  double high_ = 1.0;
  double cell_ = 1.0;
  double period_ = 1.0;
  std::uint64_t seed_ = 0;
  SpatialFn custom_;
};

enum class KernelStructure { absolutely_continuous, axes_singular };

struct KernelSpec {
  FracParams params;
  CoefficientRule coefficient = CoefficientRule::constant(1.0);
  KernelStructure structure = KernelStructure::absolutely_continuous;

  /// Throws PreconditionError when the coefficient range leaves [lambda, Lambda]
  /// or an axes kernel carries a non-unit coefficient.
  void validate() const;
  bool is_axes() const { return structure == KernelStructure::axes_singular; }
};

KernelSpec fractional_kernel(int dim, double alpha, double lambda = 1.0, double Lambda = 1.0);
KernelSpec axes_kernel(double alpha);

/// K(t; x, y) = a(t, x, y) (2 - alpha) |x - y|^{-d - alpha}.
double eval_kernel(const KernelSpec& spec, double t, const Point& x, const Point& y);

/// (2 - alpha) |x - y|^{-d - alpha} without coefficient.
inline double fractional_density(int dim, double alpha, double distance) {
  return (2.0 - alpha) * std::pow(distance, -dim - alpha);
}

struct ConditionReport {
  std::string condition;
  bool pass = false;
  double measured_min = 0.0;
  double measured_max = 0.0;
  /// The constant the condition is judged by (its meaning is condition specific).
  double constant = 0.0;
  double threshold = 0.0;
  std::size_t samples = 0;
  std::string note;
};

/// Region in which condition checkers draw (t, x, y).
struct SampleBox {
  double half_width = 2.0;
  double t_min = 0.0;
  double t_max = 1.0;
};

ConditionReport check_bounds(const KernelSpec& spec, std::size_t budget = 2000,
                             std::uint64_t seed = 0, SampleBox box = {});
ConditionReport check_symmetry(const KernelSpec& spec, std::size_t budget = 2000,
                               std::uint64_t seed = 0, SampleBox box = {});

/// rho^alpha * integral of K(t; x, .) outside B_rho(x), maximised over sampled (t, x).
/// The pass threshold is Lambda (2 - alpha) |S^{d-1}| / alpha.
ConditionReport check_cutoff(const KernelSpec& spec, const std::vector<double>& radii,
                             std::size_t budget = 64, std::uint64_t seed = 0, SampleBox box = {});

/// Integral of K(t; x, .) over R^d minus B_rho(x) (no rho^alpha scaling).
double cutoff_integral(const KernelSpec& spec, double t, const Point& x, double rho);

/// K(t; x, y) divided by the average of K(t; ., y) over B_r(x).
double ujs_ratio(const KernelSpec& spec, double t, const Point& x, const Point& y, double r);

/// Default ceiling Lambda / lambda * 4^{d + alpha} unless `ceiling` > 0.
ConditionReport check_ujs(const KernelSpec& spec, std::size_t budget = 500, std::uint64_t seed = 0,
                          double ceiling = 0.0, SampleBox box = {});

class Grid;

/// Smallest lambda for which the Poincare and Sobolev inequalities hold on the
/// sampled discrete fields (ball B_r(0) with r the grid's domain half width).
struct PoincSobReport {
  ConditionReport poincare;
  ConditionReport sobolev;
};

PoincSobReport check_poinc_sob(const KernelSpec& spec, const Grid& grid, std::size_t sample_fields,
                               std::uint64_t seed = 0, double ball_radius = 0.0);

}  // namespace nlh
