#pragma once

#include <vector>

#include "nlh/data_rule.hpp"
#include "nlh/field.hpp"
#include "nlh/grid.hpp"
#include "nlh/kernels.hpp"

namespace nlh {

/// Integral of (2 - alpha)|s|^{-1-alpha} over the cell of offset k (k != 0) on hZ.
double cell_weight_1d(double alpha, double h, int k);
/// Weight given to each nearest neighbour by the central-cell second-difference stencil.
double stencil_weight(int dim, double alpha, double h);

/// Spatial interaction weights between lattice nodes of one grid, before the
/// coefficient's time factor. w(i, j) approximates the kernel integrated over
/// the cell of node j against the centre of node i; for nearest neighbours it
/// also carries the central-cell stencil. The far weight of a node covers the
/// region beyond the truncation box.
class PairWeights {
 public:
  PairWeights(const KernelSpec& spec, GridPtr grid);

  const KernelSpec& spec() const { return spec_; }
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool axes() const { return spec_.is_axes(); }

  /// Coefficient-free weight for a lattice offset (k0, k1) != 0.
  double offset_weight(int k0, int k1 = 0) const;
  double operator()(std::size_t i, std::size_t j) const;
  /// Weight from node i to everything beyond the truncation box.
  double far_weight(std::size_t i) const;
  /// Far-field integral of the rule against the weight of node i, at time t.
  double far_load(std::size_t i, const ExteriorRule& g, double t, FarPart part = FarPart::value) const;
  /// Sum of all weights of node i (box and far field).
  double row_mass(std::size_t i) const;

  /// Nodes j with a possibly nonzero weight w(i, j), j != i.
  template <class F>
  void for_each_neighbor(std::size_t i, F&& f) const;

 private:
  KernelSpec spec_;
  GridPtr grid_;
  int span_ = 0;                 ///< table extent per axis (2N)
  std::vector<double> table_;    ///< offset weights incl. stencil; 2D row-major over |k0|, |k1|
  double far_coef_ = 1.0;
};

template <class F>
void PairWeights::for_each_neighbor(std::size_t i, F&& f) const {
  const Grid& g = *grid_;
  const int N = g.half_count();
  const auto li = g.lattice(i);
  if (g.dim() == 1) {
    for (int j0 = -N; j0 <= N; ++j0)
      if (j0 != li[0]) f(g.node_at(j0));
    return;
  }
  if (axes()) {
    for (int j0 = -N; j0 <= N; ++j0)
      if (j0 != li[0]) f(g.node_at(j0, li[1]));
    for (int j1 = -N; j1 <= N; ++j1)
      if (j1 != li[1]) f(g.node_at(li[0], j1));
    return;
  }
  for (int j1 = -N; j1 <= N; ++j1)
    for (int j0 = -N; j0 <= N; ++j0)
      if (j0 != li[0] || j1 != li[1]) f(g.node_at(j0, j1));
}

/// Per-term exterior loads of a rule; evaluation at t only rescales.
class ExteriorLoad {
 public:
  ExteriorLoad() = default;
  ExteriorLoad(const PairWeights& weights, const ExteriorRule& g);
  /// Load at time t without the coefficient's time factor.
  Vector at(double t) const;
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<TimeProfile> profiles_;
  std::vector<Vector> terms_;
  Eigen::Index size_ = 0;
};

/// Discretized L_t on the interior nodes: L u = tau(t) (A0 u_int + W u_ring + far).
class DiscreteOperator {
 public:
  DiscreteOperator(const KernelSpec& spec, GridPtr grid);

  const KernelSpec& spec() const { return weights_.spec(); }
  const Grid& grid() const { return weights_.grid(); }
  const GridPtr& grid_ptr() const { return weights_.grid_ptr(); }
  const PairWeights& weights() const { return weights_; }

  double time_factor(double t) const { return spec().coefficient.time_factor(t); }
  const Matrix& base_matrix() const { return A0_; }
  Matrix matrix(double t) const { return time_factor(t) * A0_; }
  /// Dense interior-by-ring coupling at time t (small grids; tests and export).
  Matrix exterior_weights(double t) const;
  double max_abs_diagonal(double t) const { return time_factor(t) * max_diag_; }

  /// Load vector of the rule's ring values and far field, time factor included.
  Vector exterior_load(const ExteriorRule& g, double t) const;
  ExteriorLoad make_load(const ExteriorRule& g) const { return ExteriorLoad(weights_, g); }

  /// (L u)(x_i) at interior nodes, using the field's ring values and its rule beyond the box.
  Vector apply(const Field& u, double t) const;
  /// -(L u) at interior nodes.
  Vector minus_L(const Field& u, double t) const { return -apply(u, t); }

 private:
  PairWeights weights_;
  Matrix A0_;
  double max_diag_ = 0.0;
};

/// Operator of an absolutely continuous kernel.
DiscreteOperator assemble_operator(const KernelSpec& spec, GridPtr grid);
/// Operator of the axes measure: the 1D operator along every grid line.
DiscreteOperator assemble_axes_operator(const FracParams& params, GridPtr grid);
/// Dispatches on the kernel structure.
DiscreteOperator assemble(const KernelSpec& spec, GridPtr grid);

}  // namespace nlh
