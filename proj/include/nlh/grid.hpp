#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "nlh/common.hpp"

namespace nlh {

enum class DomainShape { box, ball };

struct GridSpec {
  int dim = 1;
  DomainShape shape = DomainShape::box;
  /// Half width (box) or radius (ball) of the interior domain, centred at the origin.
  double half_width = 1.0;
  /// Nodes are laid out on [-r_trunc, r_trunc]^d; must be at least 3 * half_width.
  double r_trunc = 3.0;
  double h = 1.0 / 16.0;
};

/// Uniform lattice h Z^d restricted to the truncation box. A node is interior
/// when its centre lies strictly inside the domain; every other node belongs to
/// the exterior ring. Node k owns the cell of side h centred on it.
class Grid {
 public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  double h() const { return spec_.h; }
  double cell_volume() const { return cell_volume_; }
  /// Nodes per axis on one side of the origin.
  int half_count() const { return half_; }
  int axis_count() const { return 2 * half_ + 1; }
  /// Half width of the region covered by node cells, r_trunc + h / 2.
  double covered_half_width() const { return (half_ + 0.5) * spec_.h; }

  std::size_t node_count() const { return nodes_; }
  std::size_t interior_count() const { return interior_.size(); }
  std::size_t ring_count() const { return ring_.size(); }

  /// Integer lattice coordinates in [-N, N]^d (second entry 0 in 1D).
  std::array<int, 2> lattice(std::size_t node) const;
  std::size_t node_at(int i0, int i1 = 0) const;
  Point coord(std::size_t node) const;

  bool contains(const Point& x) const;
  bool is_interior(std::size_t node) const { return slot_[node] >= 0; }
  /// Position among interior nodes, or -1 for ring nodes.
  std::ptrdiff_t interior_slot(std::size_t node) const { return slot_[node]; }
  const std::vector<std::size_t>& interior_nodes() const { return interior_; }
  const std::vector<std::size_t>& ring_nodes() const { return ring_; }

  /// Nodes whose centre lies strictly inside B_radius(center).
  std::vector<std::size_t> nodes_in_ball(const Point& center, double radius) const;

  /// Whether the closed ball B_radius(center) lies within the interior domain.
  bool ball_inside_domain(const Point& center, double radius) const;

 private:
  GridSpec spec_;
  int half_ = 0;
  std::size_t nodes_ = 0;
  double cell_volume_ = 0.0;
  std::vector<std::ptrdiff_t> slot_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> ring_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(const GridSpec& spec) { return std::make_shared<const Grid>(spec); }

}  // namespace nlh
