#include "nlh/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlh/report_io.hpp"
#include "nlh/tails.hpp"

namespace nlh {

namespace {

constexpr double kSignTol = 1e-12;
constexpr std::size_t kMinPairs = 10000;
constexpr std::size_t kPairPoints = 600;

double time_eps(const SpaceTimeField& u) { return 1e-12 * std::max(1.0, std::abs(u.times().back())); }

std::string point_str(const Point& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += ' ';
    s += format_double(x[i]);
  }
  return s;
}

void require_nonnegative(double min_value, const char* what) {
  if (min_value < -kSignTol) {
    std::ostringstream os;
    os << what << " requires a nonnegative solution (min " << min_value << ")";
    throw PreconditionError(os.str());
  }
}

/// Indices [lo, hi) of stored times bracketing [a, b].
std::pair<std::size_t, std::size_t> bracket(const std::vector<double>& t, double a, double b) {
  std::size_t lo = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), a) - t.begin());
  std::size_t hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), b) - t.begin());
  if (lo > 0) --lo;
  if (hi < t.size()) ++hi;
  return {lo, hi};
}

/// Time average over (a, b) of a per-slice functional.
template <class F>
double windowed_average(const SpaceTimeField& u, double a, double b, F&& fn) {
  const auto [lo, hi] = bracket(u.times(), a, b);
  std::vector<double> times, vals;
  for (std::size_t k = lo; k < hi; ++k) {
    times.push_back(u.times()[k]);
    vals.push_back(fn(u.at(k)));
  }
  return time_integral(times, vals, a, b) / (b - a);
}

void add_provenance(Report& r, const Solution& s, double t0, const Point& x0, double R) {
  r.provenance = provenance_of(s, t0, x0, R);
}

}  // namespace

std::string to_string(CylinderKind k) {
  switch (k) {
    case CylinderKind::forward: return "forward";
    case CylinderKind::backward: return "backward";
    case CylinderKind::full: return "full";
    case CylinderKind::D: return "D";
    case CylinderKind::D_hat: return "D_hat";
    case CylinderKind::D_minus: return "D_minus";
    case CylinderKind::D_plus: return "D_plus";
  }
  return "unknown";
}

std::pair<double, double> Cylinder::time_interval() const {
  const double Ra = std::pow(R, alpha);
  switch (kind) {
    case CylinderKind::forward: return {t0, t0 + Ra};
    case CylinderKind::backward: return {t0 - Ra, t0};
    case CylinderKind::full: return {t0 - Ra, t0 + Ra};
    case CylinderKind::D:
    case CylinderKind::D_hat: return {t0 - 2.0 * Ra, t0};
    case CylinderKind::D_minus: {
      const double a = t0 - 2.0 * Ra;
      return {a, a + std::pow(0.5 * R, alpha)};
    }
    case CylinderKind::D_plus: return {t0 - std::pow(0.5 * R, alpha), t0};
  }
  return {t0, t0};
}

double Cylinder::ball_radius() const {
  switch (kind) {
    case CylinderKind::D: return 2.0 * R;
    case CylinderKind::D_hat: return 3.0 * R;
    case CylinderKind::D_minus:
    case CylinderKind::D_plus: return 0.5 * R;
    default: return R;
  }
}

Cylinder::Resolution Cylinder::resolve(const SpaceTimeField& u) const {
  if (u.size() == 0) throw PreconditionError("cylinder resolution on an empty solution");
  const auto [a, b] = time_interval();
  const double eps = time_eps(u);
  Resolution res;
  const auto& t = u.times();
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k] > a + eps && t[k] < b - eps) res.times.push_back(k);
  res.nodes = u.grid().nodes_in_ball(x0, ball_radius());
  if (res.times.empty()) throw PreconditionError("cylinder " + to_string(kind) + " resolves to no time slice");
  if (res.nodes.empty()) throw PreconditionError("cylinder " + to_string(kind) + " resolves to no node");
  return res;
}

Cylinder make_cylinder(CylinderKind kind, double t0, const Point& x0, double R, double alpha) {
  if (!(R > 0.0)) throw PreconditionError("cylinder radius must be positive");
  return Cylinder{kind, t0, x0, R, alpha};
}

CylStats cyl_stats(const SpaceTimeField& u, const Cylinder& c, FarPart part) {
  const auto res = c.resolve(u);
  if (res.times.size() < 4) throw PreconditionError("cylinder " + to_string(c.kind) + " resolves to fewer than 4 time slices");
  if (res.nodes.size() < 4) throw PreconditionError("cylinder " + to_string(c.kind) + " resolves to fewer than 4 nodes");
  CylStats s;
  s.sup = -std::numeric_limits<double>::infinity();
  s.inf = std::numeric_limits<double>::infinity();
  double sum = 0.0, sq = 0.0;
  for (std::size_t k : res.times) {
    const Field& f = u.at(k);
    for (std::size_t n : res.nodes) {
      const double v = apply_part(part, f[n]);
      s.sup = std::max(s.sup, v);
      s.inf = std::min(s.inf, v);
      sum += v;
      sq += v * v;
    }
  }
  const double count = static_cast<double>(res.times.size() * res.nodes.size());
  s.mean = sum / count;
  s.rms = std::sqrt(sq / count);
  s.times = res.times.size();
  s.nodes = res.nodes.size();
  return s;
}

double Report::summand(const std::string& name) const {
  for (const auto& [k, v] : summands)
    if (k == name) return v;
  throw PreconditionError("report " + inequality + " has no summand " + name);
}

void Report::finish() {
  degenerate = false;
  infinite = false;
  if (right > 0.0) {
    constant = left / right;
  } else if (left <= 0.0) {
    degenerate = true;
    constant = std::numeric_limits<double>::quiet_NaN();
  } else {
    infinite = true;
    constant = std::numeric_limits<double>::infinity();
  }
}

std::vector<std::pair<std::string, std::string>> provenance_of(const Solution& s, double t0, const Point& x0,
                                                               double R) {
  const auto& p = s.kernel.params;
  const auto& g = s.grid().spec();
  return {
      {"dim", std::to_string(p.dim)},
      {"alpha", format_double(p.alpha)},
      {"lambda", format_double(p.lambda)},
      {"Lambda", format_double(p.Lambda)},
      {"coefficient", to_string(s.kernel.coefficient.kind())},
      {"coefficient_seed", std::to_string(s.kernel.coefficient.seed())},
      {"structure", s.kernel.is_axes() ? "axes" : "density"},
      {"R", format_double(R)},
      {"t0", format_double(t0)},
      {"x0", point_str(x0)},
      {"h", format_double(g.h)},
      {"half_width", format_double(g.half_width)},
      {"r_trunc", format_double(g.r_trunc)},
      {"scheme", to_string(s.scheme)},
  };
}

void require_containment(const Solution& s, double t0, const Point& x0, double R) {
  const auto& u = s.field;
  if (u.size() == 0) throw PreconditionError("empty solution");
  const double Ra = std::pow(4.0 * R, s.kernel.params.alpha);
  const double eps = time_eps(u);
  if (t0 - Ra < u.times().front() - eps || t0 + Ra > u.times().back() + eps)
    throw PreconditionError("I_{4R}(t0) leaves the solved time range");
  if (!s.grid().ball_inside_domain(x0, 4.0 * R)) throw PreconditionError("B_{4R}(x0) leaves the domain");
}

Report harnack_quotient(const Solution& s, double t0, const Point& x0, double R) {
  require_containment(s, t0, x0, R);
  require_nonnegative(s.min_value(), "harnack_quotient");
  const double a = s.kernel.params.alpha;
  const double Ra = std::pow(R, a);
  const auto past = cyl_stats(s.field, make_cylinder(CylinderKind::backward, t0 - Ra, x0, R, a));
  const auto future = cyl_stats(s.field, make_cylinder(CylinderKind::forward, t0, x0, R, a));
  Report r;
  r.inequality = "harnack";
  r.left = past.sup;
  r.right = future.inf;
  r.summands = {{"sup", past.sup}, {"inf", future.inf}};
  add_provenance(r, s, t0, x0, R);
  r.finish();
  return r;
}

Report harnack_with_tails(const Solution& s, double t0, const Point& x0, double R) {
  require_containment(s, t0, x0, R);
  require_nonnegative(s.min_interior_value(), "harnack_with_tails");
  const auto& p = s.kernel.params;
  const double Ra = std::pow(R, p.alpha);
  const double R4a = std::pow(4.0 * R, p.alpha);
  const auto past = cyl_stats(s.field, make_cylinder(CylinderKind::backward, t0 - Ra, x0, R, p.alpha));
  const auto future = cyl_stats(s.field, make_cylinder(CylinderKind::forward, t0, x0, R, p.alpha));
  const double tail_pos =
      tail_L1_in_time(s.field, p, R, x0, t0 - 2.0 * Ra, t0 - Ra, FarPart::positive, true);
  const double tail_neg =
      tail_L1_in_time(s.field, p, 4.0 * R, x0, t0 - R4a, t0 + R4a, FarPart::negative, true);
  Report r;
  r.inequality = "harnack_tails";
  r.left = tail_pos + past.sup;
  r.right = future.inf + tail_neg;
  r.summands = {{"tail_pos", tail_pos}, {"sup", past.sup}, {"inf", future.inf}, {"tail_neg", tail_neg}};
  add_provenance(r, s, t0, x0, R);
  r.finish();
  return r;
}

Report weak_harnack_ratio(const Solution& s, double t0, const Point& x0, double R) {
  require_containment(s, t0, x0, R);
  require_nonnegative(s.min_value(), "weak_harnack_ratio");
  const auto& p = s.kernel.params;
  const double Ra = std::pow(R, p.alpha);
  const auto past = cyl_stats(s.field, make_cylinder(CylinderKind::backward, t0 - Ra, x0, R, p.alpha));
  const auto future = cyl_stats(s.field, make_cylinder(CylinderKind::forward, t0, x0, R, p.alpha));
  const double tl = tail_L1_in_time(s.field, p, R, x0, t0 - 2.0 * Ra, t0 - Ra, FarPart::absolute, true);
  Report r;
  r.inequality = "weak_harnack";
  r.left = past.mean + tl;
  r.right = future.inf;
  r.summands = {{"mean", past.mean}, {"tail", tl}, {"inf", future.inf}};
  add_provenance(r, s, t0, x0, R);
  r.finish();
  return r;
}

Report locbd_ratio(const Solution& s, double t0, const Point& x0, double R) {
  require_containment(s, t0, x0, R);
  const auto& p = s.kernel.params;
  const double Ra = std::pow(R, p.alpha);
  const auto inner = cyl_stats(s.field, make_cylinder(CylinderKind::backward, t0, x0, 0.5 * R, p.alpha), FarPart::positive);
  const auto outer = cyl_stats(s.field, make_cylinder(CylinderKind::backward, t0, x0, R, p.alpha), FarPart::positive);
  const double tl = tail_L1_in_time(s.field, p, R, x0, t0 - Ra, t0, FarPart::positive, true);
  Report r;
  r.inequality = "local_boundedness";
  r.left = inner.sup;
  r.right = outer.rms + tl;
  r.summands = {{"sup_pos", inner.sup}, {"rms_pos", outer.rms}, {"tail_pos", tl}};
  add_provenance(r, s, t0, x0, R);
  r.finish();
  return r;
}

std::vector<Report> holder_report(const Solution& s, double t0, const Point& x0, double R,
                                  const std::vector<double>& gammas, double epsilon) {
  for (double g : gammas)
    if (!(g > 0.0 && g < 1.0)) throw PreconditionError("holder exponent must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw PreconditionError("holder epsilon must be positive");
  const auto& p = s.kernel.params;
  const auto& u = s.field;
  {
    const double R4a = std::pow(4.0 * R, p.alpha);
    const double eps = time_eps(u);
    if (t0 - R4a < u.times().front() - eps || t0 > u.times().back() + eps)
      throw PreconditionError("I-_{4R}(t0) leaves the solved time range");
    if (!s.grid().ball_inside_domain(x0, 4.0 * R)) throw PreconditionError("B_{4R}(x0) leaves the domain");
  }
  const auto res = make_cylinder(CylinderKind::backward, t0, x0, R, p.alpha).resolve(u);

  // decimate both axes by a common stride until the point set is small enough
  std::size_t stride = 1;
  auto count = [&](std::size_t k) {
    return ((res.times.size() + k - 1) / k) * ((res.nodes.size() + k - 1) / k);
  };
  while (count(stride + 1) >= kPairPoints && count(stride) > kPairPoints) ++stride;
  struct Sample {
    double t;
    Point x;
    double v;
  };
  std::vector<Sample> pts;
  for (std::size_t i = 0; i < res.times.size(); i += stride) {
    const std::size_t k = res.times[i];
    for (std::size_t j = 0; j < res.nodes.size(); j += stride) {
      const std::size_t n = res.nodes[j];
      pts.push_back({u.times()[k], u.grid().coord(n), u.at(k)[n]});
    }
  }

  const double R2a = std::pow(2.0 * R, p.alpha);
  const auto outer = cyl_stats(u, make_cylinder(CylinderKind::backward, t0, x0, 2.0 * R, p.alpha));
  const double tl = tail_Lp_in_time(u, p, 0.5 * R, x0, t0 - R2a, t0, 1.0 + epsilon, FarPart::absolute, true);

  std::vector<Report> out;
  for (double g : gammas) {
    double best = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double dist = std::pow(std::abs(pts[i].t - pts[j].t), 1.0 / p.alpha) + (pts[i].x - pts[j].x).norm();
        if (dist <= 0.0) continue;
        ++pairs;
        best = std::max(best, std::abs(pts[i].v - pts[j].v) / std::pow(dist, g));
      }
    Report r;
    r.inequality = "holder";
    r.left = std::pow(R, g) * best;
    r.right = outer.rms + tl;
    r.summands = {{"gamma", g}, {"epsilon", epsilon}, {"quotient", r.left}, {"rms", outer.rms},
                  {"tail", tl}, {"pairs", static_cast<double>(pairs)}};
    add_provenance(r, s, t0, x0, R);
    if (pairs < kMinPairs)
      r.provenance.emplace_back("note", "fewer than 10000 pairs: the cylinder holds only " +
                                            std::to_string(pts.size()) + " samples");
    r.finish();
    out.push_back(std::move(r));
  }
  return out;
}

Report axes_harnack(const Solution& s, double t0, const Point& x0, double R) {
  if (!s.kernel.is_axes()) throw StructureError("axes_harnack needs an axes-operator solution");
  require_containment(s, t0, x0, R);
  require_nonnegative(s.min_value(), "axes_harnack");
  const auto& p = s.kernel.params;
  const double Ra = std::pow(R, p.alpha);
  const auto past = cyl_stats(s.field, make_cylinder(CylinderKind::backward, t0 - Ra, x0, R, p.alpha));
  const auto future = cyl_stats(s.field, make_cylinder(CylinderKind::forward, t0, x0, R, p.alpha));
  const double tl =
      windowed_average(s.field, t0 - Ra, t0, [&](const Field& f) { return tail_axes_fun(f, p, R, x0); });
  Report r;
  r.inequality = "axes_harnack";
  r.left = past.sup;
  r.right = future.inf + tl;
  double tail_free = std::numeric_limits<double>::quiet_NaN();
  if (future.inf > 0.0)
    tail_free = past.sup / future.inf;
  else if (past.sup > 0.0)
    tail_free = std::numeric_limits<double>::infinity();
  r.summands = {{"sup", past.sup}, {"inf", future.inf}, {"tail_axes", tl}, {"tail_free_constant", tail_free}};
  add_provenance(r, s, t0, x0, R);
  r.finish();
  return r;
}

IterationResult iterate_absorb(double A, double B, double C, double gamma1, double gamma2, double theta, double R,
                               const std::function<double(double)>& f, std::size_t lattice) {
  if (!(gamma1 > 0.0 && gamma2 > 0.0)) throw PreconditionError("iteration exponents must be positive");
  if (A < 0.0 || B < 0.0 || C < 0.0) throw PreconditionError("iteration coefficients must be nonnegative");
  if (!(R > 0.0)) throw PreconditionError("iteration radius must be positive");
  if (lattice < 2) throw PreconditionError("iteration lattice needs at least 2 samples");
  IterationResult res;
  if (!(theta > 0.0 && theta < 1.0)) {
    res.note = "no admissible tau: theta must lie in (0, 1)";
    return res;
  }

  std::vector<double> r(lattice), fr(lattice);
  for (std::size_t j = 0; j < lattice; ++j) {
    r[j] = 0.5 * R + 0.5 * R * static_cast<double>(j) / static_cast<double>(lattice);
    fr[j] = f(r[j]);
    if (!std::isfinite(fr[j]) || fr[j] < 0.0) {
      res.note = "f must be finite and nonnegative on the sample lattice";
      return res;
    }
  }
  res.direct_value = fr[0];

  res.hypothesis_holds = true;
  for (std::size_t i = 0; i < lattice && res.hypothesis_holds; ++i)
    for (std::size_t j = i + 1; j < lattice; ++j) {
      const double gap = r[j] - r[i];
      const double rhs = A * std::pow(gap, -gamma1) + B * std::pow(gap, -gamma2) + C + theta * fr[j];
      if (fr[i] > rhs * (1.0 + 1e-12) + 1e-300) {
        res.hypothesis_holds = false;
        res.note = "hypothesis fails at r = " + format_double(r[i]) + ", s = " + format_double(r[j]);
        break;
      }
    }

  const double g = std::max(gamma1, gamma2);
  res.tau = std::pow(theta, 1.0 / (2.0 * g));
  res.admissible = theta * std::pow(res.tau, -g) < 1.0;
  if (!res.admissible) {
    res.note = "no admissible tau for theta = " + format_double(theta);
    return res;
  }
  const double step = 0.5 * R * (1.0 - res.tau);
  res.bound = A * std::pow(step, -gamma1) / (1.0 - theta * std::pow(res.tau, -gamma1)) +
              B * std::pow(step, -gamma2) / (1.0 - theta * std::pow(res.tau, -gamma2)) + C / (1.0 - theta);
  double ti = 1.0;
  for (int i = 0; i < 200; ++i) {
    res.chain.push_back(0.5 * R + 0.5 * R * (1.0 - ti));
    ti *= res.tau;
    if (ti < 1e-15) break;
  }
  res.holds = res.bound >= res.direct_value * (1.0 - 1e-12);
  return res;
}

}  // namespace nlh
