#include "nlh/field.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "nlh/report_io.hpp"

namespace nlh {

Field::Field(GridPtr grid, Vector values, ExteriorRule exterior, double time)
    : grid_(std::move(grid)), values_(std::move(values)), exterior_(std::move(exterior)), time_(time) {
  if (!grid_) throw PreconditionError("field requires a grid");
  if (static_cast<std::size_t>(values_.size()) != grid_->node_count())
    throw PreconditionError("field value count does not match the grid node count");
}

Field Field::from_rule(GridPtr grid, const DataRule& interior, const ExteriorRule& exterior, double t) {
  Vector v(static_cast<Eigen::Index>(grid->node_count()));
  const double h = grid->h();
  for (std::size_t k = 0; k < grid->node_count(); ++k) {
    const Point x = grid->coord(k);
    v[static_cast<Eigen::Index>(k)] = grid->is_interior(k) ? interior.value(t, x) : exterior.node_value(t, x, h);
  }
  return Field(std::move(grid), std::move(v), exterior, t);
}

Field Field::from_function(GridPtr grid, const std::function<double(const Point&)>& fn,
                           ExteriorRule exterior, double t) {
  Vector v(static_cast<Eigen::Index>(grid->node_count()));
  for (std::size_t k = 0; k < grid->node_count(); ++k) v[static_cast<Eigen::Index>(k)] = fn(grid->coord(k));
  return Field(std::move(grid), std::move(v), std::move(exterior), t);
}

Field Field::with_interior(GridPtr grid, const Vector& interior, const ExteriorRule& exterior, double t) {
  if (static_cast<std::size_t>(interior.size()) != grid->interior_count())
    throw PreconditionError("interior value count does not match the grid");
  Vector v(static_cast<Eigen::Index>(grid->node_count()));
  const double h = grid->h();
  for (std::size_t k = 0; k < grid->node_count(); ++k) {
    const auto slot = grid->interior_slot(k);
    v[static_cast<Eigen::Index>(k)] = slot >= 0 ? interior[slot] : exterior.node_value(t, grid->coord(k), h);
  }
  return Field(std::move(grid), std::move(v), exterior, t);
}

Vector Field::interior_values() const {
  const auto& nodes = grid_->interior_nodes();
  Vector out(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = values_[static_cast<Eigen::Index>(nodes[i])];
  return out;
}

SpaceTimeField::SpaceTimeField(std::vector<double> times, std::vector<Field> fields)
    : times_(std::move(times)), fields_(std::move(fields)) {
  if (times_.size() != fields_.size()) throw PreconditionError("time grid and field count differ");
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (!(times_[k] > times_[k - 1])) throw PreconditionError("time grid must be strictly increasing");
  for (const auto& f : fields_)
    if (f.grid_ptr() != fields_.front().grid_ptr()) throw PreconditionError("fields must share one grid");
}

void SpaceTimeField::push_back(double t, Field field) {
  if (!times_.empty()) {
    if (!(t > times_.back())) throw PreconditionError("time grid must be strictly increasing");
    if (field.grid_ptr() != fields_.front().grid_ptr()) throw PreconditionError("fields must share one grid");
  }
  times_.push_back(t);
  fields_.push_back(std::move(field));
}

std::size_t SpaceTimeField::nearest(double t) const {
  if (times_.empty()) throw PreconditionError("empty space-time field");
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) return times_.size() - 1;
  const std::size_t k = static_cast<std::size_t>(it - times_.begin());
  if (k > 0 && std::abs(times_[k - 1] - t) <= std::abs(times_[k] - t)) return k - 1;
  return k;
}

void write_csv(const SpaceTimeField& field, const std::string& path, bool include_ring) {
  const Grid& g = field.grid();
  std::ostringstream out;
  out << std::setprecision(17);
  out << (g.dim() == 1 ? "t,x1,u\n" : "t,x1,x2,u\n");
  for (std::size_t k = 0; k < field.size(); ++k) {
    const Field& f = field.at(k);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
      if (!include_ring && !g.is_interior(n)) continue;
      const Point x = g.coord(n);
      out << field.times()[k] << ',' << x[0];
      if (g.dim() == 2) out << ',' << x[1];
      out << ',' << f[n] << '\n';
    }
  }
  write_file_atomic(path, out.str());
}

}  // namespace nlh
