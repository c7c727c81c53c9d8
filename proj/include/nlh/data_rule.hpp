#pragma once

#include <array>
#include <string>
#include <vector>

#include "nlh/common.hpp"

namespace nlh {

/// Scalar time profile multiplying a spatial pattern.
struct TimeProfile {
  enum class Kind {
    one,
    linear,             ///< t
    log_sq,             ///< (log t)^{-2} on (0, 1), 0 for t <= 0
    log_sq_derivative,  ///< -2 (log t)^{-3} / t on (0, 1), 0 for t <= 0
    step,               ///< 0 before a, 1 from a on
    pulse,              ///< 1 on [a, b), 0 elsewhere
  };
  Kind kind = Kind::one;
  double a = 0.0;
  double b = 0.0;

  double operator()(double t) const;
  static TimeProfile one() { return {}; }
  static TimeProfile linear() { return {Kind::linear}; }
  static TimeProfile log_sq() { return {Kind::log_sq}; }
  static TimeProfile log_sq_derivative() { return {Kind::log_sq_derivative}; }
  static TimeProfile step(double on) { return {Kind::step, on}; }
  static TimeProfile pulse(double on, double off) { return {Kind::pulse, on, off}; }
};

std::string to_string(TimeProfile::Kind kind);

/// One separable term profile(t) * pattern(x).
struct DataTerm {
  enum class Kind { constant, cosine, annulus, ball, gaussian };
  Kind kind = Kind::constant;
  double amplitude = 1.0;
  Point center = Point::Zero(1);
  /// annulus: inner/outer radius; ball: outer is the radius; gaussian: outer is sigma.
  double inner = 0.0;
  double outer = 0.0;
  /// cosine: pattern = sum_i cos_amp[i] * cos(x_i).
  std::array<double, 2> cos_amp{0.0, 0.0};
  TimeProfile profile;

  double pattern(const Point& x) const;
  /// Average of the pattern over the cell of side h centred at x (exact for
  /// indicator kinds in 1D, 16 x 16 midpoint sampling in 2D; pointwise otherwise).
  double cell_pattern(const Point& x, double h) const;
  /// True when the pattern vanishes identically outside [-L, L]^d.
  bool vanishes_beyond(double L) const;
  bool is_indicator() const { return kind == Kind::annulus || kind == Kind::ball; }
};

std::string to_string(DataTerm::Kind kind);

/// Sum of separable terms. Used for exterior data g, sources f and initial data.
class DataRule {
 public:
  DataRule() = default;

  static DataRule zero() { return {}; }
  static DataRule constant(double value, TimeProfile profile = {});
  static DataRule cosine(double amp0, double amp1 = 0.0, TimeProfile profile = {});
  static DataRule annulus(const Point& center, double inner, double outer, double amplitude = 1.0,
                          TimeProfile profile = {});
  static DataRule ball(const Point& center, double radius, double amplitude = 1.0,
                       TimeProfile profile = {});
  static DataRule gaussian(const Point& center, double sigma, double amplitude = 1.0,
                           TimeProfile profile = {});

  DataRule& add(const DataTerm& term);
  DataRule operator+(const DataRule& other) const;
  DataRule scaled(double factor) const;

  const std::vector<DataTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double value(double t, const Point& x) const;
  /// Value carried by a grid node: indicator terms enter through their cell average.
  double node_value(double t, const Point& x, double h) const;

  /// Whether every term vanishes outside [-L, L]^d.
  bool vanishes_beyond(double L) const;
  /// Sum of the time-weighted amplitudes of the constant terms.
  double far_constant(double t) const;
  /// Whether only constant terms survive beyond [-L, L]^d.
  bool far_is_constant(double L) const;

 private:
  std::vector<DataTerm> terms_;
};

using ExteriorRule = DataRule;

/// Pointwise transform applied to the data inside far-field integrals.
enum class FarPart { value, absolute, positive, negative, square };

double apply_part(FarPart part, double v);

/// Integral of part(g(t, y)) |c - y|^{-d - alpha} over R^d outside [-L, L]^d,
/// for c strictly inside the box. Closed form in the exit distance when the far
/// data is constant, numerical otherwise.
double far_power_integral(const DataRule& g, double t, const Point& c, double alpha, double L,
                          FarPart part = FarPart::value);

/// Integral of part(g(t, x + s e_axis)) |kernel_center - (x_axis + s)|^{-1 - alpha} ds over
/// the s with x_axis + s outside [-L, L].
double far_line_integral(const DataRule& g, double t, const Point& x, int axis,
                         double kernel_center, double alpha, double L,
                         FarPart part = FarPart::value);

/// Integral of part(g(t, y)) (1 + |y|)^{-d - alpha} over R^d outside [-L, L]^d.
double far_l1alpha_integral(const DataRule& g, double t, int dim, double alpha, double L,
                            FarPart part = FarPart::absolute);

/// Integral of |c - y|^{-d - alpha} over R^d outside [-L, L]^d.
double far_power_mass(int dim, const Point& c, double alpha, double L);

}  // namespace nlh
