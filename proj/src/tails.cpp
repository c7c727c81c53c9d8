#include "nlh/tails.hpp"

#include <algorithm>
#include <limits>

#include "nlh/quadrature.hpp"

namespace nlh {

namespace {

constexpr int kSub = 8;

double power_piece(double a, double b, double c, double alpha) {
  if (b <= a) return 0.0;
  if (c <= a) return (std::pow(a - c, -alpha) - std::pow(b - c, -alpha)) / alpha;
  if (c >= b) return (std::pow(c - b, -alpha) - std::pow(c - a, -alpha)) / alpha;
  throw SingularityError("kernel centre inside an integration cell");
}

/// Integral of |c - y|^{-2-alpha} over the cell of side h at `cell` minus B_R(x0).
double clipped_power_2d(const Point& cell, double h, const Point& x0, double R, const Point& c, double alpha) {
  const double e = -0.5 * (2.0 + alpha);
  auto f = [&](double y0, double y1) {
    const double d0 = y0 - c[0], d1 = y1 - c[1];
    return std::pow(d0 * d0 + d1 * d1, e);
  };
  const double a0 = cell[0] - 0.5 * h, a1 = cell[1] - 0.5 * h;
  // nearest and farthest distance from x0 to the cell
  const double n0 = std::max({a0 - x0[0], 0.0, x0[0] - (a0 + h)});
  const double n1 = std::max({a1 - x0[1], 0.0, x0[1] - (a1 + h)});
  const double f0 = std::max(std::abs(a0 - x0[0]), std::abs(a0 + h - x0[0]));
  const double f1 = std::max(std::abs(a1 - x0[1]), std::abs(a1 + h - x0[1]));
  const double near = std::hypot(n0, n1), far = std::hypot(f0, f1);
  if (far <= R) return 0.0;
  if (near >= R) return quad::gauss2<3>(f, a0, a0 + h, a1, a1 + h);
  const double s = h / kSub;
  double acc = 0.0;
  for (int j = 0; j < kSub; ++j)
    for (int i = 0; i < kSub; ++i)
      acc += quad::gauss2<2>(
          [&](double y0, double y1) { return std::hypot(y0 - x0[0], y1 - x0[1]) > R ? f(y0, y1) : 0.0; },
          a0 + i * s, a0 + (i + 1) * s, a1 + j * s, a1 + (j + 1) * s);
  return acc;
}

void require_tail_geometry(const Grid& g, double R, const Point& x0) {
  if (!(R > 2.0 * g.h())) throw PreconditionError("tail radius must exceed 2h");
  if (x0.size() != g.dim()) throw PreconditionError("tail centre has the wrong dimension");
  if (x0.cwiseAbs().maxCoeff() + R > g.covered_half_width())
    throw PreconditionError("B_R(x0) leaves the grid coverage");
}

}  // namespace

double clipped_power_1d(double p, double q, double x0, double R, double c, double alpha) {
  double s = 0.0;
  if (p < x0 - R) s += power_piece(p, std::min(q, x0 - R), c, alpha);
  if (q > x0 + R) s += power_piece(std::max(p, x0 + R), q, c, alpha);
  return s;
}

TailOperator::TailOperator(GridPtr grid, double alpha, double R, const Point& x0)
    : grid_(std::move(grid)), alpha_(alpha), R_(R), x0_(x0) {
  const Grid& g = *grid_;
  require_tail_geometry(g, R, x0);
  const double h = g.h();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const Point y = g.coord(k);
    double w = 0.0;
    if (g.dim() == 1) {
      w = clipped_power_1d(y[0] - 0.5 * h, y[0] + 0.5 * h, x0[0], R, x0[0], alpha);
    } else {
      if ((y - x0).norm() + h < R) continue;
      w = clipped_power_2d(y, h, x0, R, x0, alpha);
    }
    if (w > 0.0) weights_.emplace_back(k, (2.0 - alpha) * w);
  }
}

double TailOperator::operator()(const Field& v, FarPart part) const {
  if (v.grid().node_count() != grid_->node_count()) throw PreconditionError("field on a different grid");
  const FarPart cell_part = part == FarPart::value ? FarPart::absolute : part;
  double s = 0.0;
  for (const auto& [k, w] : weights_) s += w * apply_part(cell_part, v[k]);
  const double L = grid_->covered_half_width();
  if (!v.exterior().is_zero())
    s += (2.0 - alpha_) * far_power_integral(v.exterior(), v.time(), x0_, alpha_, L, cell_part);
  return s;
}

double TailOperator::truncation_bound(const Field& v) const {
  if (!v.exterior().vanishes_beyond(grid_->covered_half_width())) return 0.0;
  const double sup = v.values().cwiseAbs().maxCoeff();
  return sup * (2.0 - alpha_) * sphere_measure(grid_->dim()) * std::pow(grid_->spec().r_trunc, -alpha_) / alpha_;
}

double tail(const Field& v, const FracParams& params, double R, const Point& x0, FarPart part) {
  return TailOperator(v.grid_ptr(), params.alpha, R, x0)(v, part);
}

std::vector<double> tail_series(const SpaceTimeField& u, const FracParams& params, double R, const Point& x0,
                                FarPart part) {
  if (u.size() == 0) return {};
  const TailOperator op(u.at(0).grid_ptr(), params.alpha, R, x0);
  std::vector<double> out;
  out.reserve(u.size());
  for (const auto& f : u.fields()) out.push_back(op(f, part));
  return out;
}

double time_integral(const std::vector<double>& times, const std::vector<double>& values, double a, double b) {
  if (times.size() != values.size() || times.empty()) throw PreconditionError("time integral needs matching samples");
  const double eps = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (!(a < b)) throw PreconditionError("time window must satisfy a < b");
  if (a < times.front() - eps || b > times.back() + eps) throw PreconditionError("time window outside the time grid");
  auto interp = [&](double t) {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return values.front();
    if (it == times.end()) return values.back();
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    const double t0 = times[k - 1], t1 = times[k];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * values[k - 1] + w * values[k];
  };
  double s = 0.0;
  double tp = a, vp = interp(a);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] <= a) continue;
    if (times[k] >= b) break;
    s += 0.5 * (vp + values[k]) * (times[k] - tp);
    tp = times[k];
    vp = values[k];
  }
  s += 0.5 * (vp + interp(b)) * (b - tp);
  return s;
}

namespace {

/// Tail values on the stored slices touching [a, b] (plus one neighbour each side).
std::pair<std::vector<double>, std::vector<double>> window_tails(const SpaceTimeField& u, const FracParams& params,
                                                                 double R, const Point& x0, double a, double b,
                                                                 FarPart part) {
  const auto& t = u.times();
  if (t.empty()) throw PreconditionError("empty space-time field");
  const double eps = 1e-12 * std::max(1.0, std::abs(t.back()));
  if (!(a < b) || a < t.front() - eps || b > t.back() + eps)
    throw PreconditionError("time window outside the time grid");
  const TailOperator op(u.at(0).grid_ptr(), params.alpha, R, x0);
  std::size_t lo = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), a) - t.begin());
  std::size_t hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), b) - t.begin());
  if (lo > 0) --lo;
  if (hi < t.size()) ++hi;
  std::vector<double> times, vals;
  for (std::size_t k = lo; k < hi; ++k) {
    times.push_back(t[k]);
    vals.push_back(op(u.at(k), part));
  }
  return {times, vals};
}

}  // namespace

double tail_L1_in_time(const SpaceTimeField& u, const FracParams& params, double R, const Point& x0, double a,
                       double b, FarPart part, bool average) {
  auto [times, vals] = window_tails(u, params, R, x0, a, b, part);
  const double s = time_integral(times, vals, a, b);
  return average ? s / (b - a) : s;
}

double tail_Linf_in_time(const SpaceTimeField& u, const FracParams& params, double R, const Point& x0, double a,
                         double b, FarPart part) {
  auto [times, vals] = window_tails(u, params, R, x0, a, b, part);
  double m = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] >= a - 1e-14 && times[k] <= b + 1e-14) {
      m = any ? std::max(m, vals[k]) : vals[k];
      any = true;
    }
  if (!any) throw PreconditionError("no stored time inside the window");
  return m;
}

double tail_Lp_in_time(const SpaceTimeField& u, const FracParams& params, double R, const Point& x0, double a,
                       double b, double p, FarPart part, bool average) {
  if (!(p > 0.0)) throw PreconditionError("exponent p must be positive");
  auto [times, vals] = window_tails(u, params, R, x0, a, b, part);
  for (double& v : vals) v = std::pow(v, p);
  double s = time_integral(times, vals, a, b);
  if (average) s /= (b - a);
  return std::pow(s, 1.0 / p);
}

double tail_K_fun(const Field& v, const KernelSpec& spec, double r, double R, const Point& x0) {
  if (spec.is_axes()) throw StructureError("tail_K needs a kernel density");
  if (!(r < R)) throw PreconditionError("tail_K needs r < R");
  const Grid& g = v.grid();
  require_tail_geometry(g, R, x0);
  const auto centers = g.nodes_in_ball(x0, r);
  if (centers.empty()) throw PreconditionError("no node inside B_r(x0)");
  const double a = spec.params.alpha;
  const double h = g.h();
  const double t = v.time();
  const double L = g.covered_half_width();
  const double tf = spec.coefficient.time_factor(t);
  double best = 0.0;
  for (std::size_t ci : centers) {
    const Point x = g.coord(ci);
    double s = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      const double vk = std::abs(v[k]);
      if (vk == 0.0) continue;
      const Point y = g.coord(k);
      if ((y - x0).norm() + h < R) continue;
      const double w = g.dim() == 1 ? clipped_power_1d(y[0] - 0.5 * h, y[0] + 0.5 * h, x0[0], R, x[0], a)
                                    : clipped_power_2d(y, h, x0, R, x, a);
      if (w > 0.0) s += vk * spec.coefficient.spatial(x, y) * w;
    }
    s *= (2.0 - a) * tf;
    if (!v.exterior().is_zero())
      s += tf * spec.coefficient.far_spatial() * (2.0 - a) *
           far_power_integral(v.exterior(), t, x, a, L, FarPart::absolute);
    best = std::max(best, s);
  }
  return best;
}

double tail_axes_fun(const Field& v, const FracParams& params, double R, const Point& x0) {
  const Grid& g = v.grid();
  if (g.dim() != 2 || g.spec().shape != DomainShape::box) throw PreconditionError("tail_axes needs a 2D box grid");
  require_tail_geometry(g, R, x0);
  const double a = params.alpha;
  const double h = g.h();
  const int N = g.half_count();
  const double L = g.covered_half_width();
  const double t = v.time();
  double best = 0.0;
  for (std::size_t ci : g.nodes_in_ball(x0, R)) {
    const auto li = g.lattice(ci);
    const Point x = g.coord(ci);
    double s = 0.0;
    for (int ax = 0; ax < 2; ++ax) {
      const int other = 1 - ax;
      const double off = x[other] - x0[other];
      const double chord = std::sqrt(std::max(0.0, R * R - off * off));
      for (int j = -N; j <= N; ++j) {
        const std::size_t k = ax == 0 ? g.node_at(j, li[1]) : g.node_at(li[0], j);
        const double vk = std::abs(v[k]);
        if (vk == 0.0) continue;
        const double y = j * h;
        s += vk * clipped_power_1d(y - 0.5 * h, y + 0.5 * h, x0[ax], chord, x0[ax], a);
      }
      if (!v.exterior().is_zero()) s += far_line_integral(v.exterior(), t, x, ax, x0[ax], a, L, FarPart::absolute);
    }
    best = std::max(best, std::pow(R, a) * s);
  }
  return best;
}

}  // namespace nlh
