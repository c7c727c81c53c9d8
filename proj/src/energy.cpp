#include "nlh/energy.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace nlh {

namespace {

double far_pair_term(const PairWeights& w, std::size_t i, double t, const Field& u, const Field& v) {
  const Grid& g = w.grid();
  const double L = g.covered_half_width();
  const auto& gu = u.exterior();
  const auto& gv = v.exterior();
  const double ui = u[i], vi = v[i];
  double s = ui * vi * w.far_weight(i);
  if (!gv.is_zero()) s -= ui * w.far_load(i, gv, t);
  if (!gu.is_zero()) s -= vi * w.far_load(i, gu, t);
  if (gu.vanishes_beyond(L) || gv.vanishes_beyond(L)) return s;
  if (gu.far_is_constant(L) && gv.far_is_constant(L))
    return s + gu.far_constant(t) * gv.far_constant(t) * w.far_weight(i);
  throw PreconditionError("far-field energy needs a vanishing or constant exterior rule");
}

}  // namespace

double energy_form(const PairWeights& w, double t, const Field& u, const Field& v, const EnergyRegion& region) {
  if (w.axes()) throw StructureError("energy form of the axes measure is not implemented by density");
  const Grid& g = w.grid();
  if (u.grid().node_count() != g.node_count() || v.grid().node_count() != g.node_count())
    throw PreconditionError("fields and weights live on different grids");
  double s = 0.0;
  auto pair = [&](std::size_t i, std::size_t j) { return w(i, j) * (u[i] - u[j]) * (v[i] - v[j]); };
  switch (region.kind) {
    case EnergyRegion::Kind::cross: {
      for (std::size_t i : g.interior_nodes()) {
        w.for_each_neighbor(i, [&](std::size_t j) { s += (g.is_interior(j) ? 1.0 : 2.0) * pair(i, j); });
        s += 2.0 * far_pair_term(w, i, t, u, v);
      }
      break;
    }
    case EnergyRegion::Kind::ball: {
      const auto nodes = g.nodes_in_ball(region.center, region.radius);
      for (std::size_t i : nodes)
        for (std::size_t j : nodes)
          if (i != j) s += pair(i, j);
      break;
    }
    case EnergyRegion::Kind::ball_all: {
      const auto nodes = g.nodes_in_ball(region.center, region.radius);
      for (std::size_t i : nodes) {
        w.for_each_neighbor(i, [&](std::size_t j) { s += pair(i, j); });
        s += far_pair_term(w, i, t, u, v);
      }
      break;
    }
  }
  return w.spec().coefficient.time_factor(t) * g.cell_volume() * s;
}

double energy_form(const KernelSpec& spec, GridPtr grid, double t, const Field& u, const Field& v,
                   const EnergyRegion& region) {
  if (spec.is_axes()) throw StructureError("energy form needs a kernel density");
  return energy_form(PairWeights(spec, std::move(grid)), t, u, v, region);
}

double energy_against(const DiscreteOperator& op, double t, const Field& u, const Vector& phi) {
  return 2.0 * op.grid().cell_volume() * phi.dot(op.minus_L(u, t));
}

namespace {

void require_resolved(const Grid& g, double radius) {
  if (2.0 * radius / g.h() < 4.0) throw PreconditionError("grid too coarse: fewer than 4 nodes across the ball");
}

}  // namespace

double seminorm_V(const Field& u, const KernelSpec& spec, const Point& center, double radius, double t) {
  require_resolved(u.grid(), radius);
  return std::sqrt(std::max(0.0, energy_form(spec, u.grid_ptr(), t, u, u, EnergyRegion::ball_all(center, radius))));
}

double seminorm_H(const Field& u, const KernelSpec& spec, const Point& center, double radius, double t) {
  require_resolved(u.grid(), radius);
  return std::sqrt(std::max(0.0, energy_form(spec, u.grid_ptr(), t, u, u, EnergyRegion::ball(center, radius))));
}

double l2_squared(const Field& u, const Point& center, double radius) {
  double s = 0.0;
  for (std::size_t k : u.grid().nodes_in_ball(center, radius)) s += u[k] * u[k];
  return s * u.grid().cell_volume();
}

double norm_V_squared(const Field& u, const KernelSpec& spec, const Point& center, double radius, double t) {
  const double sv = seminorm_V(u, spec, center, radius, t);
  return l2_squared(u, center, radius) + sv * sv;
}

double norm_L1alpha(const Field& u, const FracParams& params) {
  const Grid& g = u.grid();
  const int d = g.dim();
  double s = 0.0;
  for (std::size_t k = 0; k < g.node_count(); ++k)
    s += std::abs(u[k]) * std::pow(1.0 + g.coord(k).norm(), -d - params.alpha);
  s *= g.cell_volume();
  return s + far_l1alpha_integral(u.exterior(), u.time(), d, params.alpha, g.covered_half_width());
}

PoincSobReport check_poinc_sob(const KernelSpec& spec, const Grid& grid_in, std::size_t sample_fields,
                               std::uint64_t seed, double ball_radius) {
  if (spec.is_axes()) throw StructureError("Poincare/Sobolev check needs a kernel density");
  auto grid = std::make_shared<const Grid>(grid_in);
  const double r = ball_radius > 0.0 ? ball_radius : grid->spec().half_width / 1.5;
  const double rho = 0.5 * r;
  if (2.0 * r / grid->h() < 8.0) throw PreconditionError("grid too coarse: fewer than 8 nodes across B_r");
  const int d = spec.params.dim;
  const double a = spec.params.alpha;
  const Point c = Point::Zero(d);
  const PairWeights w(spec, grid);
  const auto inner = grid->nodes_in_ball(c, r);
  const auto outer = grid->nodes_in_ball(c, r + rho);
  const double hd = grid->cell_volume();
  const bool sob_inf = a >= d;
  const double q = sob_inf ? 0.0 : d / (d - a);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  PoincSobReport rep;
  auto init = [&](ConditionReport& cr, const char* name) {
    cr.condition = name;
    cr.measured_min = std::numeric_limits<double>::infinity();
    cr.measured_max = 0.0;
  };
  init(rep.poincare, "poincare");
  init(rep.sobolev, "sobolev");
  for (std::size_t s = 0; s < sample_fields; ++s) {
    Vector vals = Vector::Zero(static_cast<Eigen::Index>(grid->node_count()));
    for (std::size_t k : outer) vals[static_cast<Eigen::Index>(k)] = normal(rng);
    const Field v(grid, vals);
    const double t = 0.0;
    double mean = 0.0;
    for (std::size_t k : inner) mean += v[k];
    mean /= static_cast<double>(inner.size());
    double var = 0.0;
    for (std::size_t k : inner) var += (v[k] - mean) * (v[k] - mean);
    var *= hd;
    const double e_in = energy_form(w, t, v, v, EnergyRegion::ball(c, r));
    if (var > 0.0) {
      const double lam = std::pow(r, a) * e_in / var;
      rep.poincare.measured_min = std::min(rep.poincare.measured_min, lam);
      rep.poincare.measured_max = std::max(rep.poincare.measured_max, lam);
      ++rep.poincare.samples;
    }
    const double e_out = energy_form(w, t, v, v, EnergyRegion::ball(c, r + rho));
    double l1 = 0.0;
    for (std::size_t k : outer) l1 += v[k] * v[k];
    l1 *= hd;
    double lq = 0.0;
    if (sob_inf) {
      for (std::size_t k : inner) lq = std::max(lq, v[k] * v[k]);
    } else {
      for (std::size_t k : inner) lq += std::pow(v[k] * v[k], q);
      lq = std::pow(lq * hd, 1.0 / q);
    }
    if (lq > 0.0) {
      const double lam = (e_out + std::pow(rho, -a) * l1) / lq;
      rep.sobolev.measured_min = std::min(rep.sobolev.measured_min, lam);
      rep.sobolev.measured_max = std::max(rep.sobolev.measured_max, lam);
      ++rep.sobolev.samples;
    }
  }
  for (ConditionReport* cr : {&rep.poincare, &rep.sobolev}) {
    if (cr->samples == 0) cr->measured_min = 0.0;
    cr->constant = cr->measured_min;
    cr->threshold = 0.0;
    cr->pass = cr->samples > 0 && cr->constant > 0.0;
  }
  rep.poincare.note = "smallest lambda with lambda int (v - [v])^2 <= r^alpha E_{B_r}(v, v)";
  rep.sobolev.note = sob_inf ? "alpha >= d: the L^{d/(d - alpha)} norm is replaced by L^infinity"
                             : "smallest lambda in the Sobolev inequality on B_r, rho = r/2";
  return rep;
}

}  // namespace nlh
