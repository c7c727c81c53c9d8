#include "nlh/discrete_operator.hpp"

#include <algorithm>

#include "nlh/quadrature.hpp"

namespace nlh {

double cell_weight_1d(double alpha, double h, int k) {
  const double m = std::abs(k);
  if (m == 0) throw SingularityError("the central cell has no off-diagonal weight");
  return (2.0 - alpha) / alpha * (std::pow((m - 0.5) * h, -alpha) - std::pow((m + 0.5) * h, -alpha));
}

double stencil_weight(int dim, double alpha, double h) {
  const double q = std::pow(0.5 * h, 2.0 - alpha);
  if (dim == 1) return q / (h * h);
  // 1/2 of the integral of cos^2(theta) r(theta)^{2 - alpha} over the square's boundary radius
  const double pi = std::numbers::pi;
  const double i1 = quad::gauss<30>([&](double th) { return std::pow(std::cos(th), alpha); }, -pi / 4, pi / 4);
  const double i2 = quad::gauss<30>(
      [&](double th) { return std::pow(std::cos(th), 2) * std::pow(std::sin(th), alpha - 2.0); }, pi / 4,
      3 * pi / 4);
  return 0.5 * q * (2.0 * i1 + 2.0 * i2) / (h * h);
}

namespace {

double cell_weight_2d(double alpha, double h, int k0, int k1) {
  auto f = [alpha](double s0, double s1) {
    return (2.0 - alpha) * std::pow(s0 * s0 + s1 * s1, -0.5 * (2.0 + alpha));
  };
  const double a0 = (k0 - 0.5) * h, b0 = (k0 + 0.5) * h;
  const double a1 = (k1 - 0.5) * h, b1 = (k1 + 0.5) * h;
  if (std::max(std::abs(k0), std::abs(k1)) <= 1) return quad::gauss2<4>(f, a0, b0, a1, b1);
  return quad::gauss2<2>(f, a0, b0, a1, b1);
}

}  // namespace

PairWeights::PairWeights(const KernelSpec& spec, GridPtr grid) : spec_(spec), grid_(std::move(grid)) {
  if (!grid_) throw PreconditionError("operator requires a grid");
  spec_.validate();
  if (spec_.params.dim != grid_->dim()) throw PreconditionError("kernel and grid dimensions differ");
  if (spec_.is_axes() && grid_->spec().shape != DomainShape::box)
    throw PreconditionError("the axes operator needs a box domain");
  const double a = spec_.params.alpha;
  const double h = grid_->h();
  span_ = 2 * grid_->half_count();
  far_coef_ = spec_.coefficient.far_spatial();
  const int n = span_ + 1;
  if (grid_->dim() == 1 || spec_.is_axes()) {
    table_.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k <= span_; ++k) table_[static_cast<std::size_t>(k)] = cell_weight_1d(a, h, k);
    table_[1] += stencil_weight(1, a, h);
  } else {
    table_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k1 = 0; k1 <= span_; ++k1)
      for (int k0 = 0; k0 <= span_; ++k0)
        if (k0 || k1) table_[static_cast<std::size_t>(k1) * n + k0] = cell_weight_2d(a, h, k0, k1);
    const double s = stencil_weight(2, a, h);
    table_[1] += s;
    table_[static_cast<std::size_t>(n)] += s;
  }
}

double PairWeights::offset_weight(int k0, int k1) const {
  k0 = std::abs(k0);
  k1 = std::abs(k1);
  if (k0 > span_ || k1 > span_) throw PreconditionError("lattice offset outside the truncation box");
  if (grid_->dim() == 1) return table_[static_cast<std::size_t>(k0)];
  if (spec_.is_axes()) {
    if (k1 == 0) return table_[static_cast<std::size_t>(k0)];
    if (k0 == 0) return table_[static_cast<std::size_t>(k1)];
    return 0.0;
  }
  return table_[static_cast<std::size_t>(k1) * (span_ + 1) + k0];
}

double PairWeights::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const auto li = grid_->lattice(i);
  const auto lj = grid_->lattice(j);
  const double w = offset_weight(lj[0] - li[0], lj[1] - li[1]);
  if (w == 0.0) return 0.0;
  const auto& c = spec_.coefficient;
  if (c.kind() == CoefficientKind::constant) return c.low() * w;
  if (c.kind() == CoefficientKind::time_oscillating) return w;
  return c.spatial(grid_->coord(i), grid_->coord(j)) * w;
}

double PairWeights::far_weight(std::size_t i) const {
  const double a = spec_.params.alpha;
  const double L = grid_->covered_half_width();
  const Point x = grid_->coord(i);
  if (spec_.is_axes()) {
    double s = 0.0;
    for (int ax = 0; ax < 2; ++ax) s += (std::pow(L - x[ax], -a) + std::pow(L + x[ax], -a)) / a;
    return (2.0 - a) * s;
  }
  return far_coef_ * (2.0 - a) * far_power_mass(grid_->dim(), x, a, L);
}

double PairWeights::far_load(std::size_t i, const ExteriorRule& g, double t, FarPart part) const {
  if (g.is_zero()) return 0.0;
  const double a = spec_.params.alpha;
  const double L = grid_->covered_half_width();
  const Point x = grid_->coord(i);
  if (spec_.is_axes()) {
    double s = 0.0;
    for (int ax = 0; ax < 2; ++ax) s += far_line_integral(g, t, x, ax, x[ax], a, L, part);
    return (2.0 - a) * s;
  }
  return far_coef_ * (2.0 - a) * far_power_integral(g, t, x, a, L, part);
}

double PairWeights::row_mass(std::size_t i) const {
  double s = 0.0;
  const auto kind = spec_.coefficient.kind();
  if (kind == CoefficientKind::constant || kind == CoefficientKind::time_oscillating) {
    const double c = kind == CoefficientKind::constant ? spec_.coefficient.low() : 1.0;
    const auto li = grid_->lattice(i);
    const int N = grid_->half_count();
    if (grid_->dim() == 1 || spec_.is_axes()) {
      for (int ax = 0; ax < (grid_->dim() == 1 ? 1 : 2); ++ax)
        for (int j = -N; j <= N; ++j)
          if (j != li[ax]) s += table_[static_cast<std::size_t>(std::abs(j - li[ax]))];
    } else {
      for (int j1 = -N; j1 <= N; ++j1)
        for (int j0 = -N; j0 <= N; ++j0)
          if (j0 != li[0] || j1 != li[1]) s += offset_weight(j0 - li[0], j1 - li[1]);
    }
    s *= c;
  } else {
    for_each_neighbor(i, [&](std::size_t j) { s += (*this)(i, j); });
  }
  return s + far_weight(i);
}

ExteriorLoad::ExteriorLoad(const PairWeights& weights, const ExteriorRule& g) {
  const Grid& grid = weights.grid();
  const auto& interior = grid.interior_nodes();
  size_ = static_cast<Eigen::Index>(interior.size());
  for (const auto& term : g.terms()) {
    DataTerm unit = term;
    unit.profile = TimeProfile::one();
    ExteriorRule single;
    single.add(unit);
    std::vector<double> ring_value(grid.node_count(), 0.0);
    for (std::size_t j : grid.ring_nodes()) ring_value[j] = single.node_value(0.0, grid.coord(j), grid.h());
    Vector v(size_);
    for (std::size_t p = 0; p < interior.size(); ++p) {
      const std::size_t i = interior[p];
      double s = 0.0;
      weights.for_each_neighbor(i, [&](std::size_t j) {
        if (!grid.is_interior(j) && ring_value[j] != 0.0) s += weights(i, j) * ring_value[j];
      });
      v[static_cast<Eigen::Index>(p)] = s + weights.far_load(i, single, 0.0);
    }
    profiles_.push_back(term.profile);
    terms_.push_back(std::move(v));
  }
}

Vector ExteriorLoad::at(double t) const {
  Vector out = Vector::Zero(size_);
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const double p = profiles_[k](t);
    if (p != 0.0) out += p * terms_[k];
  }
  return out;
}

DiscreteOperator::DiscreteOperator(const KernelSpec& spec, GridPtr grid) : weights_(spec, std::move(grid)) {
  const Grid& g = weights_.grid();
  const auto& interior = g.interior_nodes();
  const Eigen::Index n = static_cast<Eigen::Index>(interior.size());
  A0_ = Matrix::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const std::size_t i = interior[static_cast<std::size_t>(p)];
    weights_.for_each_neighbor(i, [&](std::size_t j) {
      const auto q = g.interior_slot(j);
      if (q >= 0) A0_(p, q) = weights_(i, j);
    });
    A0_(p, p) = -weights_.row_mass(i);
  }
  max_diag_ = A0_.diagonal().cwiseAbs().maxCoeff();
}

Matrix DiscreteOperator::exterior_weights(double t) const {
  const Grid& g = grid();
  const auto& interior = g.interior_nodes();
  const auto& ring = g.ring_nodes();
  std::vector<std::ptrdiff_t> ring_slot(g.node_count(), -1);
  for (std::size_t r = 0; r < ring.size(); ++r) ring_slot[ring[r]] = static_cast<std::ptrdiff_t>(r);
  Matrix W = Matrix::Zero(static_cast<Eigen::Index>(interior.size()), static_cast<Eigen::Index>(ring.size()));
  for (std::size_t p = 0; p < interior.size(); ++p)
    weights_.for_each_neighbor(interior[p], [&](std::size_t j) {
      if (ring_slot[j] >= 0) W(static_cast<Eigen::Index>(p), ring_slot[j]) = weights_(interior[p], j);
    });
  return time_factor(t) * W;
}

Vector DiscreteOperator::exterior_load(const ExteriorRule& g, double t) const {
  return time_factor(t) * ExteriorLoad(weights_, g).at(t);
}

Vector DiscreteOperator::apply(const Field& u, double t) const {
  if (u.grid_ptr() != grid_ptr() && u.grid().node_count() != grid().node_count())
    throw PreconditionError("field and operator live on different grids");
  const Grid& g = grid();
  const auto& interior = g.interior_nodes();
  Vector out = A0_ * u.interior_values();
  for (std::size_t p = 0; p < interior.size(); ++p) {
    const std::size_t i = interior[p];
    double s = 0.0;
    weights_.for_each_neighbor(i, [&](std::size_t j) {
      if (!g.is_interior(j)) s += weights_(i, j) * u[j];
    });
    out[static_cast<Eigen::Index>(p)] += s + weights_.far_load(i, u.exterior(), t);
  }
  return time_factor(t) * out;
}

DiscreteOperator assemble_operator(const KernelSpec& spec, GridPtr grid) {
  if (spec.is_axes()) throw StructureError("axes kernels are assembled by assemble_axes_operator");
  if (grid && !(grid->h() < grid->spec().half_width)) throw PreconditionError("grid spacing must be below the domain size");
  return DiscreteOperator(spec, std::move(grid));
}

DiscreteOperator assemble_axes_operator(const FracParams& params, GridPtr grid) {
  if (params.dim != 2) throw PreconditionError("the axes operator is defined for d = 2");
  KernelSpec spec = axes_kernel(params.alpha);
  spec.params = params;
  return DiscreteOperator(spec, std::move(grid));
}

DiscreteOperator assemble(const KernelSpec& spec, GridPtr grid) {
  return spec.is_axes() ? assemble_axes_operator(spec.params, std::move(grid))
                        : assemble_operator(spec, std::move(grid));
}

}  // namespace nlh
