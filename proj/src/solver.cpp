#include "nlh/solver.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "nlh/energy.hpp"

namespace nlh {

TimeSchedule TimeSchedule::uniform(double t_start, double t_end, double dt) {
  if (!(t_end > t_start)) throw PreconditionError("schedule needs t_start < t_end");
  if (!(dt > 0.0)) throw PreconditionError("time step must be positive");
  const double span = t_end - t_start;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));
  TimeSchedule s;
  s.times.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) s.times[k] = t_start + span * static_cast<double>(k) / static_cast<double>(n);
  s.times.back() = t_end;
  return s;
}

TimeSchedule TimeSchedule::graded(double t_start, double t_end, double dt, int k_max, int substeps) {
  if (!(t_start < 0.0 && t_end > 0.0 && t_end < 1.0))
    throw PreconditionError("graded schedule needs t_start < 0 < t_end < 1");
  if (k_max < 1 || substeps < 1) throw PreconditionError("graded schedule needs k_max >= 1 and substeps >= 1");
  TimeSchedule s = uniform(t_start, 0.0, dt);
  double t = std::ldexp(1.0, -k_max);
  s.times.push_back(t);
  for (int k = k_max - 1; k >= 0; --k) {
    const double next = std::ldexp(1.0, -k);
    if (next > t_end) break;
    for (int j = 1; j <= substeps; ++j) s.times.push_back(t + (next - t) * j / substeps);
    s.times.back() = next;
    t = next;
  }
  if (t_end > t * (1.0 + 1e-14)) {
    for (int j = 1; j <= substeps; ++j) s.times.push_back(t + (t_end - t) * j / substeps);
    s.times.back() = t_end;
  }
  return s;
}

double TimeSchedule::max_step() const {
  double m = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) m = std::max(m, times[k] - times[k - 1]);
  return m;
}

void Scenario::validate() const {
  if (!grid) throw PreconditionError("scenario has no grid");
  kernel.validate();
  if (kernel.params.dim != grid->dim()) throw PreconditionError("kernel and grid dimensions differ");
  if (schedule.times.size() < 2) throw PreconditionError("schedule needs at least two times");
  for (std::size_t k = 1; k < schedule.times.size(); ++k)
    if (!(schedule.times[k] > schedule.times[k - 1])) throw PreconditionError("schedule must be strictly increasing");
  if (initial_values && static_cast<std::size_t>(initial_values->size()) != grid->interior_count())
    throw PreconditionError("initial values do not match the interior node count");
}

std::string to_string(Scheme s) { return s == Scheme::explicit_euler ? "explicit" : "implicit"; }

namespace {

/// Per-term node patterns of a rule over a node list, so evaluation at t only rescales.
struct PatternCache {
  std::vector<TimeProfile> profiles;
  std::vector<Vector> patterns;
  Eigen::Index size = 0;

  PatternCache(const DataRule& rule, const Grid& g, const std::vector<std::size_t>& nodes) {
    size = static_cast<Eigen::Index>(nodes.size());
    for (const auto& term : rule.terms()) {
      Vector p(size);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        p[static_cast<Eigen::Index>(i)] = term.cell_pattern(g.coord(nodes[i]), g.h());
      profiles.push_back(term.profile);
      patterns.push_back(std::move(p));
    }
  }
  Vector at(double t) const {
    Vector out = Vector::Zero(size);
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      const double c = profiles[k](t);
      if (c != 0.0) out += c * patterns[k];
    }
    return out;
  }
};

Field assemble_field(const GridPtr& grid, const Vector& interior, const Vector& ring, const ExteriorRule& g,
                     double t) {
  Vector v(static_cast<Eigen::Index>(grid->node_count()));
  const auto& in = grid->interior_nodes();
  const auto& rg = grid->ring_nodes();
  for (std::size_t i = 0; i < in.size(); ++i) v[static_cast<Eigen::Index>(in[i])] = interior[static_cast<Eigen::Index>(i)];
  for (std::size_t i = 0; i < rg.size(); ++i) v[static_cast<Eigen::Index>(rg[i])] = ring[static_cast<Eigen::Index>(i)];
  return Field(grid, std::move(v), g, t);
}

class ImplicitCache {
 public:
  ImplicitCache(const Matrix& A0, double tol) : A0_(A0), tol_(tol) {}

  Vector solve(double scale, const Vector& rhs, std::ptrdiff_t step) {
    auto it = cache_.find(scale);
    if (it == cache_.end()) {
      if (cache_.size() >= 8) cache_.clear();
      Matrix M = Matrix::Identity(A0_.rows(), A0_.cols()) - scale * A0_;
      Eigen::LLT<Matrix> llt(M);
      if (llt.info() != Eigen::Success) throw NumericalError("implicit system is not positive definite", step);
      it = cache_.emplace(scale, Entry{std::move(M), std::move(llt)}).first;
    }
    const auto& e = it->second;
    Vector x = e.llt.solve(rhs);
    const double scale_rhs = std::max(1.0, rhs.norm());
    double res = (e.M * x - rhs).norm();
    if (res > tol_ * scale_rhs) {
      x += e.llt.solve(rhs - e.M * x);
      res = (e.M * x - rhs).norm();
    }
    if (!(res <= tol_ * scale_rhs)) {
      std::ostringstream os;
      os << "linear solve did not reach tolerance at step " << step << " (residual " << res << ")";
      throw NumericalError(os.str(), step);
    }
    return x;
  }

 private:
  struct Entry {
    Matrix M;
    Eigen::LLT<Matrix> llt;
  };
  const Matrix& A0_;
  double tol_;
  std::map<double, Entry> cache_;
};

}  // namespace

double Solution::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : field.fields()) m = std::min(m, f.values().minCoeff());
  return m;
}

double Solution::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& f : field.fields()) m = std::max(m, f.values().maxCoeff());
  return m;
}

double Solution::min_interior_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : field.fields())
    for (std::size_t k : f.grid().interior_nodes()) m = std::min(m, f[k]);
  return m;
}

Solution solve(const Scenario& sc, const SolveOptions& opt) {
  sc.validate();
  if (!(opt.cfl_factor > 0.0 && opt.cfl_factor <= 1.0)) throw PreconditionError("cfl_factor must lie in (0, 1]");
  const GridPtr& grid = sc.grid;
  const auto op = std::make_shared<const DiscreteOperator>(assemble(sc.kernel, grid));
  const Grid& g = *grid;
  const ExteriorLoad load = op->make_load(sc.exterior);
  const PatternCache source(sc.source, g, g.interior_nodes());
  const PatternCache ring(sc.exterior, g, g.ring_nodes());
  const auto& times = sc.schedule.times;

  Vector u(static_cast<Eigen::Index>(g.interior_count()));
  if (sc.initial_values) {
    u = *sc.initial_values;
  } else {
    const auto& in = g.interior_nodes();
    for (std::size_t i = 0; i < in.size(); ++i)
      u[static_cast<Eigen::Index>(i)] = sc.initial.value(times.front(), g.coord(in[i]));
  }
  if (!u.allFinite()) throw NumericalError("initial data is not finite", 0);

  Solution sol;
  sol.kernel = sc.kernel;
  sol.scheme = opt.scheme;
  sol.op = op;
  const double L = g.covered_half_width();
  if (sc.exterior.vanishes_beyond(L)) {
    std::ostringstream os;
    os << "exterior rule vanishes beyond the truncation box (half width " << L
       << "); far-field load is exactly zero";
    sol.truncation_ledger.push_back(os.str());
  } else if (sc.exterior.far_is_constant(L)) {
    sol.truncation_ledger.push_back("far field of the exterior rule integrated in closed form");
  } else {
    sol.truncation_ledger.push_back("far field of the exterior rule integrated numerically with a mean-value remainder");
  }

  const std::size_t stride = std::max<std::size_t>(1, opt.checkpoint_stride);
  sol.field.push_back(times.front(), assemble_field(grid, u, ring.at(times.front()), sc.exterior, times.front()));
  ImplicitCache implicit(op->base_matrix(), opt.linear_tolerance);
  const Matrix& A0 = op->base_matrix();

  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    const double t0 = times[n], t1 = times[n + 1], dt = t1 - t0;
    const auto step = static_cast<std::ptrdiff_t>(n);
    Vector next;
    if (opt.scheme == Scheme::explicit_euler) {
      const double limit = opt.cfl_factor / op->max_abs_diagonal(t0);
      if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "CFL violated at step " << n << ": dt = " << dt << " exceeds " << limit;
        throw NumericalError(os.str(), step);
      }
      const double tau = op->time_factor(t0);
      next = u + dt * (tau * (A0 * u + load.at(t0)) + source.at(t0));
    } else {
      const double tau = op->time_factor(t1);
      const Vector rhs = u + dt * (tau * load.at(t1) + source.at(t1));
      next = implicit.solve(dt * tau, rhs, step);
    }
    if (!next.allFinite()) {
      std::ostringstream os;
      os << "non-finite state at step " << n << " (t = " << t1 << ")";
      throw NumericalError(os.str(), step);
    }
    StepDiagnostics d;
    d.step = n + 1;
    d.t = t1;
    d.dt = dt;
    d.min = next.minCoeff();
    d.max = next.maxCoeff();
    d.update_norm = (next - u).cwiseAbs().maxCoeff();
    sol.diagnostics.push_back(d);
    u = std::move(next);
    if ((n + 1) % stride == 0 || n + 2 == times.size())
      sol.field.push_back(t1, assemble_field(grid, u, ring.at(t1), sc.exterior, t1));
  }
  return sol;
}

std::vector<Vector> bump_family(const Grid& g) {
  const double X = g.spec().half_width;
  const int d = g.dim();
  std::vector<Point> centers;
  if (d == 1) {
    for (double c : {-0.5, -0.25, 0.0, 0.25, 0.5}) centers.push_back(make_point(c * X));
  } else {
    centers = {make_point(0.0, 0.0), make_point(X / 3, 0.0), make_point(-X / 3, 0.0), make_point(0.0, X / 3),
               make_point(0.0, -X / 3)};
  }
  std::vector<Vector> out;
  const auto& in = g.interior_nodes();
  for (double width : {X / 4, X / 8}) {
    for (const Point& c : centers) {
      Vector phi(static_cast<Eigen::Index>(in.size()));
      for (std::size_t i = 0; i < in.size(); ++i) {
        const Point x = g.coord(in[i]);
        double v = 1.0;
        for (int a = 0; a < d; ++a) {
          const double s = (x[a] - c[a]) / width;
          v *= s * s < 1.0 ? (1.0 - s * s) * (1.0 - s * s) : 0.0;
        }
        phi[static_cast<Eigen::Index>(i)] = v;
      }
      out.push_back(std::move(phi));
    }
  }
  return out;
}

ResidualReport residual_check(const Solution& sol, const Scenario& sc) {
  const auto op = sol.op ? sol.op : std::make_shared<const DiscreteOperator>(assemble(sc.kernel, sc.grid));
  const Grid& g = op->grid();
  const auto bumps = bump_family(g);
  const PatternCache source(sc.source, g, g.interior_nodes());
  const double hd = g.cell_volume();
  ResidualReport rep;
  rep.test_functions = bumps.size();
  const auto& f = sol.field;
  if (f.size() < 2) return rep;
  // E(u, phi) / 2 = h^d phi^T (-L u) for phi supported in the domain.
  auto half_energy_terms = [&](std::size_t k) {
    const Vector mlu = op->minus_L(f.at(k), f.times()[k]);
    Vector e(static_cast<Eigen::Index>(bumps.size()));
    for (std::size_t b = 0; b < bumps.size(); ++b) e[static_cast<Eigen::Index>(b)] = hd * bumps[b].dot(mlu);
    return e;
  };
  Vector e_prev = half_energy_terms(0);
  Vector u_prev = f.at(0).interior_values();
  Vector s_prev = source.at(f.times()[0]);
  for (std::size_t k = 1; k < f.size(); ++k) {
    const double dt = f.times()[k] - f.times()[k - 1];
    const Vector u = f.at(k).interior_values();
    const Vector e = half_energy_terms(k);
    const Vector s = source.at(f.times()[k]);
    const Vector dudt = (u - u_prev) / dt;
    const Vector smid = 0.5 * (s + s_prev);
    double worst = 0.0;
    for (std::size_t b = 0; b < bumps.size(); ++b) {
      const auto bi = static_cast<Eigen::Index>(b);
      const double r = hd * bumps[b].dot(dudt) + 0.5 * (e[bi] + e_prev[bi]) - hd * bumps[b].dot(smid);
      worst = std::max(worst, std::abs(r));
    }
    rep.per_step.push_back(worst);
    rep.max_residual = std::max(rep.max_residual, worst);
    e_prev = e;
    u_prev = u;
    s_prev = s;
  }
  return rep;
}

ComparisonResult compare_solutions(const Solution& lo, const Solution& hi, double tol) {
  if (lo.field.size() != hi.field.size() || lo.grid().node_count() != hi.grid().node_count())
    throw PreconditionError("mismatched discretizations");
  ComparisonResult res;
  for (std::size_t k = 0; k < lo.field.size(); ++k) {
    if (lo.field.times()[k] != hi.field.times()[k]) throw PreconditionError("mismatched time grids");
    const Vector diff = lo.field.at(k).values() - hi.field.at(k).values();
    const double viol = diff.maxCoeff();
    res.max_gap = std::max(res.max_gap, diff.cwiseAbs().maxCoeff());
    if (viol > res.max_violation) res.max_violation = viol;
    if (viol > tol && res.ordered) {
      res.ordered = false;
      res.first_violation_step = k;
    }
  }
  return res;
}

ComparisonResult comparison_check(const Scenario& lower, const Scenario& upper, const SolveOptions& options) {
  if (!lower.grid || !upper.grid) throw PreconditionError("scenarios need grids");
  const auto& a = lower.grid->spec();
  const auto& b = upper.grid->spec();
  if (a.dim != b.dim || a.shape != b.shape || a.half_width != b.half_width || a.r_trunc != b.r_trunc || a.h != b.h)
    throw PreconditionError("mismatched discretizations: grids differ");
  if (lower.kernel.structure != upper.kernel.structure || lower.kernel.params.alpha != upper.kernel.params.alpha ||
      lower.kernel.coefficient.kind() != upper.kernel.coefficient.kind())
    throw PreconditionError("mismatched discretizations: kernels differ");
  if (lower.schedule.times != upper.schedule.times) throw PreconditionError("mismatched discretizations: schedules differ");
  return compare_solutions(solve(lower, options), solve(upper, options));
}

}  // namespace nlh
