#pragma once

#include "nlh/discrete_operator.hpp"
#include "nlh/field.hpp"

namespace nlh {

/// Integration region of an energy form.
struct EnergyRegion {
  enum class Kind {
    cross,     ///< R^d x R^d minus (complement x complement) of the interior domain
    ball,      ///< B x B
    ball_all,  ///< B x R^d
  };
  Kind kind = Kind::cross;
  Point center = Point::Zero(1);
  double radius = 0.0;

  static EnergyRegion cross() { return {}; }
  static EnergyRegion ball(const Point& c, double r) { return {Kind::ball, c, r}; }
  static EnergyRegion ball_all(const Point& c, double r) { return {Kind::ball_all, c, r}; }
};

/// E_M(u, v) = sum over ordered node pairs in M of h^d w(i, j) (u_i - u_j)(v_i - v_j), time
/// factor included, plus the far field beyond the truncation box for the regions that
/// reach it. The far product term needs one of the two exterior rules to vanish
/// beyond the box, or both to be constant there.
double energy_form(const PairWeights& weights, double t, const Field& u, const Field& v,
                   const EnergyRegion& region = EnergyRegion::cross());
double energy_form(const KernelSpec& spec, GridPtr grid, double t, const Field& u, const Field& v,
                   const EnergyRegion& region = EnergyRegion::cross());

/// E(u, phi) for phi vanishing outside the interior domain, via 2 h^d phi^T (-L u).
double energy_against(const DiscreteOperator& op, double t, const Field& u, const Vector& phi_interior);

/// [u]_{V(B | R^d)}: square root of the B x R^d energy.
double seminorm_V(const Field& u, const KernelSpec& spec, const Point& center, double radius, double t = 0.0);
/// [u]_{H(B)}: square root of the B x B energy.
double seminorm_H(const Field& u, const KernelSpec& spec, const Point& center, double radius, double t = 0.0);
/// ||u||^2_{L^2(B)} + [u]^2_{V(B | R^d)}.
double norm_V_squared(const Field& u, const KernelSpec& spec, const Point& center, double radius,
                      double t = 0.0);
/// ||u||_{L^1_alpha}: weighted node sum plus the exterior rule beyond the box.
double norm_L1alpha(const Field& u, const FracParams& params);

/// Discrete L^2(B) squared norm over the nodes strictly inside B.
double l2_squared(const Field& u, const Point& center, double radius);

}  // namespace nlh
