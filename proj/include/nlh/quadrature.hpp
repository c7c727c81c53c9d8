#pragma once

#include <boost/math/quadrature/gauss.hpp>

namespace nlh::quad {

/// Fixed-order Gauss-Legendre rule on [a, b].
template <unsigned N, class F>
double gauss(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, N>::integrate(std::forward<F>(f), a, b);
}

/// Tensor-product Gauss-Legendre rule on [a0,b0] x [a1,b1].
template <unsigned N, class F>
double gauss2(F&& f, double a0, double b0, double a1, double b1) {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const double c0 = 0.5 * (a0 + b0), r0 = 0.5 * (b0 - a0);
  const double c1 = 0.5 * (a1 + b1), r1 = 0.5 * (b1 - a1);
  // boost stores the non-negative half of a symmetric rule
  auto expand = [&](std::size_t i, double& node, double& weight, int sign) {
    node = sign * static_cast<double>(x[i]);
    weight = static_cast<double>(w[i]);
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int si : {1, -1}) {
      if (si < 0 && x[i] == 0) continue;
      double xi, wi;
      expand(i, xi, wi, si);
      for (std::size_t j = 0; j < x.size(); ++j) {
        for (int sj : {1, -1}) {
          if (sj < 0 && x[j] == 0) continue;
          double xj, wj;
          expand(j, xj, wj, sj);
          sum += wi * wj * f(c0 + r0 * xi, c1 + r1 * xj);
        }
      }
    }
  }
  return sum * r0 * r1;
}

}  // namespace nlh::quad
