#include "nlh/grid.hpp"

#include <cmath>

namespace nlh {

namespace {
constexpr double kGeomEps = 1e-12;
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  if (spec.dim != 1 && spec.dim != 2) throw PreconditionError("grid dimension must be 1 or 2");
  if (!(spec.h > 0.0)) throw PreconditionError("grid spacing must be positive");
  if (!(spec.half_width > 0.0)) throw PreconditionError("domain half width must be positive");
  if (spec.h >= spec.half_width) throw PreconditionError("grid spacing h must be below the domain half width");
  if (spec.r_trunc < 3.0 * spec.half_width - kGeomEps)
    throw PreconditionError("truncation radius must be at least 3 times the domain half width");
  const double ratio = spec.r_trunc / spec.h;
  half_ = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - half_) > 1e-9 * std::max(1.0, ratio))
    throw PreconditionError("truncation radius must be an integer multiple of h");

  const std::size_t axis = static_cast<std::size_t>(axis_count());
  nodes_ = spec.dim == 1 ? axis : axis * axis;
  cell_volume_ = std::pow(spec.h, spec.dim);
  slot_.assign(nodes_, -1);
  for (std::size_t k = 0; k < nodes_; ++k) {
    if (contains(coord(k))) {
      slot_[k] = static_cast<std::ptrdiff_t>(interior_.size());
      interior_.push_back(k);
    } else {
      ring_.push_back(k);
    }
  }
  if (interior_.empty()) throw PreconditionError("grid has no interior nodes");
}

std::array<int, 2> Grid::lattice(std::size_t node) const {
  const int axis = axis_count();
  if (spec_.dim == 1) return {static_cast<int>(node) - half_, 0};
  return {static_cast<int>(node % axis) - half_, static_cast<int>(node / axis) - half_};
}

std::size_t Grid::node_at(int i0, int i1) const {
  if (spec_.dim == 1) return static_cast<std::size_t>(i0 + half_);
  return static_cast<std::size_t>((i1 + half_) * axis_count() + (i0 + half_));
}

Point Grid::coord(std::size_t node) const {
  const auto l = lattice(node);
  if (spec_.dim == 1) return make_point(l[0] * spec_.h);
  return make_point(l[0] * spec_.h, l[1] * spec_.h);
}

bool Grid::contains(const Point& x) const {
  const double limit = spec_.half_width - kGeomEps * spec_.half_width;
  if (spec_.shape == DomainShape::box) return x.cwiseAbs().maxCoeff() < limit;
  return x.norm() < limit;
}

std::vector<std::size_t> Grid::nodes_in_ball(const Point& center, double radius) const {
  std::vector<std::size_t> out;
  const double limit = radius * (1.0 - kGeomEps);
  const int span = static_cast<int>(std::ceil(radius / spec_.h)) + 1;
  const int c0 = static_cast<int>(std::lround(center[0] / spec_.h));
  const int c1 = spec_.dim == 2 ? static_cast<int>(std::lround(center[1] / spec_.h)) : 0;
  const int s1 = spec_.dim == 2 ? span : 0;
  for (int j = c1 - s1; j <= c1 + s1; ++j) {
    for (int i = c0 - span; i <= c0 + span; ++i) {
      if (std::abs(i) > half_ || std::abs(j) > half_) continue;
      const std::size_t k = node_at(i, j);
      if ((coord(k) - center).norm() < limit) out.push_back(k);
    }
  }
  return out;
}

bool Grid::ball_inside_domain(const Point& center, double radius) const {
  const double slack = kGeomEps * spec_.half_width;
  if (spec_.shape == DomainShape::box)
    return center.cwiseAbs().maxCoeff() + radius <= spec_.half_width + slack;
  return center.norm() + radius <= spec_.half_width + slack;
}

}  // namespace nlh
