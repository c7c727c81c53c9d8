#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlh/data_rule.hpp"
#include "nlh/grid.hpp"

namespace nlh {

/// Node values on a grid (interior and ring) together with the rule that
/// continues the field beyond the truncation box. Ring values are authoritative
/// inside the box; the rule only supplies the far field.
class Field {
 public:
  Field(GridPtr grid, Vector values, ExteriorRule exterior = {}, double time = 0.0);

  /// Interior values from `interior`, ring values from the exterior rule at time t.
  static Field from_rule(GridPtr grid, const DataRule& interior, const ExteriorRule& exterior, double t);
  static Field from_function(GridPtr grid, const std::function<double(const Point&)>& fn,
                             ExteriorRule exterior = {}, double t = 0.0);
  static Field with_interior(GridPtr grid, const Vector& interior, const ExteriorRule& exterior, double t);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  double operator[](std::size_t node) const { return values_[static_cast<Eigen::Index>(node)]; }
  const ExteriorRule& exterior() const { return exterior_; }
  double time() const { return time_; }

  Vector interior_values() const;

 private:
  GridPtr grid_;
  Vector values_;
  ExteriorRule exterior_;
  double time_ = 0.0;
};

/// Time-indexed fields sharing one grid; times strictly increasing.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(std::vector<double> times, std::vector<Field> fields);

  void push_back(double t, Field field);

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Field>& fields() const { return fields_; }
  const Field& at(std::size_t k) const { return fields_.at(k); }
  const Grid& grid() const { return fields_.front().grid(); }

  /// Index of the stored time closest to t.
  std::size_t nearest(double t) const;

 private:
  std::vector<double> times_;
  std::vector<Field> fields_;
};

/// Writes "t,x1[,x2],u" rows for the selected nodes (interior only by default).
void write_csv(const SpaceTimeField& field, const std::string& path, bool include_ring = false);

}  // namespace nlh
