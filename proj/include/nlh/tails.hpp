#pragma once

#include <utility>
#include <vector>

#include "nlh/field.hpp"
#include "nlh/kernels.hpp"

namespace nlh {

/// tail(v; R, x0) = (2 - alpha) int_{|y - x0| > R} |v(y)| |x0 - y|^{-d - alpha} dy.
///
/// Node cells are integrated exactly against the power weight after clipping
/// away B_R(x0) (closed form in 1D, subdivided Gauss in 2D); the exterior rule
/// supplies the region beyond the truncation box.
class TailOperator {
 public:
  TailOperator(GridPtr grid, double alpha, double R, const Point& x0);

  /// Tail of part(v) at the field's own time.
  double operator()(const Field& v, FarPart part = FarPart::absolute) const;
  /// Bound on the contribution missed beyond the box when the exterior rule
  /// vanishes there: sup|v| (2 - alpha) |S^{d-1}| R_trunc^{-alpha} / alpha. Zero otherwise.
  double truncation_bound(const Field& v) const;

  double radius() const { return R_; }
  const Point& center() const { return x0_; }

 private:
  GridPtr grid_;
  double alpha_;
  double R_;
  Point x0_;
  std::vector<std::pair<std::size_t, double>> weights_;
};

double tail(const Field& v, const FracParams& params, double R, const Point& x0,
            FarPart part = FarPart::absolute);

/// Tail at every stored time of the space-time field.
std::vector<double> tail_series(const SpaceTimeField& u, const FracParams& params, double R, const Point& x0,
                                FarPart part = FarPart::absolute);

/// Trapezoidal integral over (a, b) of per-slice values, with linear
/// interpolation at the endpoints. Throws when (a, b) leaves the time grid.
double time_integral(const std::vector<double>& times, const std::vector<double>& values, double a, double b);

double tail_L1_in_time(const SpaceTimeField& u, const FracParams& params, double R, const Point& x0, double a,
                       double b, FarPart part = FarPart::absolute, bool average = false);
/// Max over stored times in [a, b].
double tail_Linf_in_time(const SpaceTimeField& u, const FracParams& params, double R, const Point& x0, double a,
                         double b, FarPart part = FarPart::absolute);
/// (int_a^b tail^p dt)^{1/p}, or the averaged (mean of tail^p)^{1/p}.
double tail_Lp_in_time(const SpaceTimeField& u, const FracParams& params, double R, const Point& x0, double a,
                       double b, double p, FarPart part = FarPart::absolute, bool average = false);

/// sup over nodes x in B_r(x0) of int_{|y - x0| > R} |v(y)| K(t; x, y) dy at the field's time.
double tail_K_fun(const Field& v, const KernelSpec& spec, double r, double R, const Point& x0);

/// sup over nodes x in B_R(x0) of R^alpha sum_i int |v(x + s e_i)| |(x0)_i - (x_i + s)|^{-1-alpha} ds,
/// over the s with x + s e_i outside B_R(x0).
double tail_axes_fun(const Field& v, const FracParams& params, double R, const Point& x0);

/// Integral of |c - y|^{-1-alpha} over [p, q] minus (x0 - R, x0 + R); c must lie outside the
/// remaining pieces.
double clipped_power_1d(double p, double q, double x0, double R, double c, double alpha);

}  // namespace nlh
