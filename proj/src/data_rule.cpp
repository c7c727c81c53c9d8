#include "nlh/data_rule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlh/quadrature.hpp"

namespace nlh {

double TimeProfile::operator()(double t) const {
  switch (kind) {
    case Kind::one:
      return 1.0;
    case Kind::linear:
      return t;
    case Kind::log_sq: {
      if (t <= 0.0) return 0.0;
      if (t >= 1.0) return std::numeric_limits<double>::quiet_NaN();
      const double l = std::log(t);
      return 1.0 / (l * l);
    }
    case Kind::log_sq_derivative: {
      if (t <= 0.0) return 0.0;
      if (t >= 1.0) return std::numeric_limits<double>::quiet_NaN();
      const double l = std::log(t);
      return -2.0 / (l * l * l * t);
    }
    case Kind::step:
      return t >= a ? 1.0 : 0.0;
    case Kind::pulse:
      return (t >= a && t < b) ? 1.0 : 0.0;
  }
  return 0.0;
}

std::string to_string(TimeProfile::Kind kind) {
  switch (kind) {
    case TimeProfile::Kind::one: return "one";
    case TimeProfile::Kind::linear: return "linear";
    case TimeProfile::Kind::log_sq: return "log_sq";
    case TimeProfile::Kind::log_sq_derivative: return "log_sq_derivative";
    case TimeProfile::Kind::step: return "step";
    case TimeProfile::Kind::pulse: return "pulse";
  }
  return "?";
}

std::string to_string(DataTerm::Kind kind) {
  switch (kind) {
    case DataTerm::Kind::constant: return "constant";
    case DataTerm::Kind::cosine: return "cosine";
    case DataTerm::Kind::annulus: return "annulus";
    case DataTerm::Kind::ball: return "ball";
    case DataTerm::Kind::gaussian: return "gaussian";
  }
  return "?";
}

namespace {

double interval_overlap(double a0, double b0, double a1, double b1) {
  return std::max(0.0, std::min(b0, b1) - std::max(a0, a1));
}

/// Length of {y in [lo, hi] : r_in < |y - c| < r_out}.
double annulus_overlap_1d(double lo, double hi, double c, double r_in, double r_out) {
  return interval_overlap(lo, hi, c + r_in, c + r_out) + interval_overlap(lo, hi, c - r_out, c - r_in);
}

}  // namespace

double DataTerm::pattern(const Point& x) const {
  switch (kind) {
    case Kind::constant:
      return amplitude;
    case Kind::cosine: {
      double s = cos_amp[0] * std::cos(x[0]);
      if (x.size() > 1) s += cos_amp[1] * std::cos(x[1]);
      return amplitude * s;
    }
    case Kind::annulus: {
      const double r = (x - center).norm();
      return (r > inner && r < outer) ? amplitude : 0.0;
    }
    case Kind::ball:
      return (x - center).norm() < outer ? amplitude : 0.0;
    case Kind::gaussian: {
      const double r2 = (x - center).squaredNorm();
      return amplitude * std::exp(-r2 / (2.0 * outer * outer));
    }
  }
  return 0.0;
}

double DataTerm::cell_pattern(const Point& x, double h) const {
  if (!is_indicator()) return pattern(x);
  const double r_in = kind == Kind::annulus ? inner : -1.0;
  if (x.size() == 1) {
    const double lo = x[0] - 0.5 * h, hi = x[0] + 0.5 * h;
    double len;
    if (r_in < 0.0)
      len = interval_overlap(lo, hi, center[0] - outer, center[0] + outer);
    else
      len = annulus_overlap_1d(lo, hi, center[0], r_in, outer);
    return amplitude * len / h;
  }
  // cheap exits when the cell is clearly on one side
  const double dist = (x - center).norm();
  const double half_diag = 0.5 * std::sqrt(2.0) * h;
  auto inside = [&](double r) { return r > std::max(r_in, 0.0) && r < outer; };
  const bool boundary_near = std::abs(dist - outer) <= half_diag ||
                             (r_in > 0.0 && std::abs(dist - r_in) <= half_diag);
  if (!boundary_near) return inside(dist) || (r_in < 0.0 && dist < outer) ? amplitude : 0.0;
  constexpr int kSub = 16;
  int hits = 0;
  for (int j = 0; j < kSub; ++j) {
    for (int i = 0; i < kSub; ++i) {
      const double y0 = x[0] + ((i + 0.5) / kSub - 0.5) * h;
      const double y1 = x[1] + ((j + 0.5) / kSub - 0.5) * h;
      const double r = std::hypot(y0 - center[0], y1 - center[1]);
      if (r_in < 0.0 ? r < outer : (r > r_in && r < outer)) ++hits;
    }
  }
  return amplitude * static_cast<double>(hits) / (kSub * kSub);
}

bool DataTerm::vanishes_beyond(double L) const {
  switch (kind) {
    case Kind::constant:
    case Kind::cosine:
      return amplitude == 0.0;
    case Kind::annulus:
    case Kind::ball:
      return center.cwiseAbs().maxCoeff() + outer <= L;
    case Kind::gaussian:
      // below double precision relative to the amplitude
      return center.cwiseAbs().maxCoeff() + 40.0 * outer <= L;
  }
  return false;
}

DataRule DataRule::constant(double value, TimeProfile profile) {
  DataRule r;
  r.add({DataTerm::Kind::constant, value, Point::Zero(1), 0.0, 0.0, {0.0, 0.0}, profile});
  return r;
}

DataRule DataRule::cosine(double amp0, double amp1, TimeProfile profile) {
  DataRule r;
  r.add({DataTerm::Kind::cosine, 1.0, Point::Zero(1), 0.0, 0.0, {amp0, amp1}, profile});
  return r;
}

DataRule DataRule::annulus(const Point& center, double inner, double outer, double amplitude,
                           TimeProfile profile) {
  if (!(inner >= 0.0 && outer > inner)) throw PreconditionError("annulus radii must satisfy 0 <= inner < outer");
  DataRule r;
  r.add({DataTerm::Kind::annulus, amplitude, center, inner, outer, {0.0, 0.0}, profile});
  return r;
}

DataRule DataRule::ball(const Point& center, double radius, double amplitude, TimeProfile profile) {
  if (!(radius > 0.0)) throw PreconditionError("ball radius must be positive");
  DataRule r;
  r.add({DataTerm::Kind::ball, amplitude, center, 0.0, radius, {0.0, 0.0}, profile});
  return r;
}

DataRule DataRule::gaussian(const Point& center, double sigma, double amplitude, TimeProfile profile) {
  if (!(sigma > 0.0)) throw PreconditionError("gaussian width must be positive");
  DataRule r;
  r.add({DataTerm::Kind::gaussian, amplitude, center, 0.0, sigma, {0.0, 0.0}, profile});
  return r;
}

DataRule& DataRule::add(const DataTerm& term) {
  terms_.push_back(term);
  return *this;
}

DataRule DataRule::operator+(const DataRule& other) const {
  DataRule r = *this;
  for (const auto& t : other.terms_) r.add(t);
  return r;
}

DataRule DataRule::scaled(double factor) const {
  DataRule r = *this;
  for (auto& t : r.terms_) t.amplitude *= factor;
  return r;
}

double DataRule::value(double t, const Point& x) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.profile(t) * term.pattern(x);
  return s;
}

double DataRule::node_value(double t, const Point& x, double h) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.profile(t) * term.cell_pattern(x, h);
  return s;
}

bool DataRule::vanishes_beyond(double L) const {
  return std::all_of(terms_.begin(), terms_.end(), [L](const DataTerm& d) { return d.vanishes_beyond(L); });
}

double DataRule::far_constant(double t) const {
  double c = 0.0;
  for (const auto& term : terms_)
    if (term.kind == DataTerm::Kind::constant) c += term.profile(t) * term.amplitude;
  return c;
}

bool DataRule::far_is_constant(double L) const {
  return std::all_of(terms_.begin(), terms_.end(), [L](const DataTerm& d) {
    return d.kind == DataTerm::Kind::constant || d.vanishes_beyond(L);
  });
}

double apply_part(FarPart part, double v) {
  switch (part) {
    case FarPart::value: return v;
    case FarPart::absolute: return std::abs(v);
    case FarPart::positive: return std::max(v, 0.0);
    case FarPart::negative: return std::max(-v, 0.0);
    case FarPart::square: return v * v;
  }
  return v;
}

namespace {

/// Distance from c (inside [-L, L]^2) to the box boundary along angle theta.
double exit_distance(const Point& c, double L, double theta) {
  const double dx = std::cos(theta), dy = std::sin(theta);
  double r = std::numeric_limits<double>::infinity();
  if (dx > 0) r = std::min(r, (L - c[0]) / dx);
  if (dx < 0) r = std::min(r, (-L - c[0]) / dx);
  if (dy > 0) r = std::min(r, (L - c[1]) / dy);
  if (dy < 0) r = std::min(r, (-L - c[1]) / dy);
  return r;
}

/// Integral over theta in [0, 2 pi) of f(theta), split at the box corners seen from c.
template <class F>
double angular_integral(const Point& c, double L, F&& f) {
  std::array<double, 5> cuts{};
  const double corners[4][2] = {{L, L}, {-L, L}, {-L, -L}, {L, -L}};
  for (int k = 0; k < 4; ++k) {
    double a = std::atan2(corners[k][1] - c[1], corners[k][0] - c[0]);
    if (a < 0) a += 2.0 * std::numbers::pi;
    cuts[k] = a;
  }
  std::sort(cuts.begin(), cuts.begin() + 4);
  cuts[4] = cuts[0] + 2.0 * std::numbers::pi;
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += quad::gauss<20>(f, cuts[k], cuts[k + 1]);
  return s;
}

constexpr double kFarSpan1d = 2.0 * std::numbers::pi * 400.0;
constexpr double kFarSpan2d = 64.0;

}  // namespace

double far_power_mass(int dim, const Point& c, double alpha, double L) {
  if (dim == 1) return (std::pow(L - c[0], -alpha) + std::pow(L + c[0], -alpha)) / alpha;
  return angular_integral(c, L, [&](double th) { return std::pow(exit_distance(c, L, th), -alpha); }) / alpha;
}

double far_power_integral(const DataRule& g, double t, const Point& c, double alpha, double L,
                          FarPart part) {
  const int dim = static_cast<int>(c.size());
  if (g.far_is_constant(L)) {
    const double v = apply_part(part, g.far_constant(t));
    return v == 0.0 ? 0.0 : v * far_power_mass(dim, c, alpha, L);
  }
  if (dim == 1) {
    double s = 0.0;
    for (int side : {1, -1}) {
      const double r0 = L - side * c[0];
      auto gval = [&](double r) { return g.value(t, make_point(c[0] + side * r)); };
      auto w = [&](double r) { return std::pow(r, -1.0 - alpha); };
      const double panel = 0.5 * std::numbers::pi;
      const int panels = static_cast<int>(std::ceil(kFarSpan1d / panel));
      double body = 0.0;
      for (int p = 0; p < panels; ++p) {
        const double a = r0 + p * panel;
        body += quad::gauss<10>([&](double r) { return apply_part(part, gval(r)) * w(r); }, a, a + panel);
      }
      const double end = r0 + panels * panel;
      const double mean =
          quad::gauss<20>([&](double r) { return apply_part(part, gval(r)); }, end - 8.0 * panel, end) /
          (8.0 * panel);
      s += body + mean * std::pow(end, -alpha) / alpha;
    }
    return s;
  }
  return angular_integral(c, L, [&](double th) {
    const double e0 = std::cos(th), e1 = std::sin(th);
    const double r0 = exit_distance(c, L, th);
    auto gval = [&](double r) { return g.value(t, make_point(c[0] + r * e0, c[1] + r * e1)); };
    const double panel = 0.5;
    const int panels = static_cast<int>(std::ceil(kFarSpan2d / panel));
    double body = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double a = r0 + p * panel;
      body += quad::gauss<10>(
          [&](double r) { return apply_part(part, gval(r)) * std::pow(r, -1.0 - alpha); }, a, a + panel);
    }
    const double end = r0 + panels * panel;
    const double mean =
        quad::gauss<20>([&](double r) { return apply_part(part, gval(r)); }, end - 8.0 * panel, end) /
        (8.0 * panel);
    return body + mean * std::pow(end, -alpha) / alpha;
  });
}

double far_line_integral(const DataRule& g, double t, const Point& x, int axis,
                         double kernel_center, double alpha, double L, FarPart part) {
  double s = 0.0;
  for (int side : {1, -1}) {
    // far segment: y_axis = side * (L + r), r > 0
    const double gap = L - side * kernel_center;  // distance from kernel centre to the box face
    if (g.far_is_constant(L)) {
      const double v = apply_part(part, g.far_constant(t));
      if (v != 0.0) s += v * std::pow(gap, -alpha) / alpha;
      continue;
    }
    auto gval = [&](double r) {
      Point y = x;
      y[axis] = side * (L + r);
      return g.value(t, y);
    };
    const double panel = 0.5 * std::numbers::pi;
    const int panels = static_cast<int>(std::ceil(kFarSpan1d / panel));
    double body = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double a = p * panel;
      body += quad::gauss<10>(
          [&](double r) { return apply_part(part, gval(r)) * std::pow(gap + r, -1.0 - alpha); }, a,
          a + panel);
    }
    const double end = panels * panel;
    const double mean =
        quad::gauss<20>([&](double r) { return apply_part(part, gval(r)); }, end - 8.0 * panel, end) /
        (8.0 * panel);
    s += body + mean * std::pow(gap + end, -alpha) / alpha;
  }
  return s;
}

double far_l1alpha_integral(const DataRule& g, double t, int dim, double alpha, double L, FarPart part) {
  const Point c = Point::Zero(dim);
  auto radial_tail = [&](double r0) {
    // integral over (r0, inf) of r^{d-1} (1 + r)^{-d - alpha}
    if (dim == 1) return std::pow(1.0 + r0, -alpha) / alpha;
    return std::pow(1.0 + r0, -alpha) / alpha - std::pow(1.0 + r0, -1.0 - alpha) / (1.0 + alpha);
  };
  if (g.far_is_constant(L)) {
    const double v = apply_part(part, g.far_constant(t));
    if (v == 0.0) return 0.0;
    if (dim == 1) return v * 2.0 * radial_tail(L);
    return v * angular_integral(c, L, [&](double th) { return radial_tail(exit_distance(c, L, th)); });
  }
  auto along = [&](const Point& dir, double r0) {
    auto gval = [&](double r) {
      Point y = r * dir;
      return g.value(t, y);
    };
    const double span = dim == 1 ? kFarSpan1d : kFarSpan2d;
    const double panel = dim == 1 ? 0.5 * std::numbers::pi : 0.5;
    const int panels = static_cast<int>(std::ceil(span / panel));
    double body = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double a = r0 + p * panel;
      body += quad::gauss<10>(
          [&](double r) {
            return apply_part(part, gval(r)) * std::pow(r, dim - 1) * std::pow(1.0 + r, -dim - alpha);
          },
          a, a + panel);
    }
    const double end = r0 + panels * panel;
    const double mean =
        quad::gauss<20>([&](double r) { return apply_part(part, gval(r)); }, end - 8.0 * panel, end) /
        (8.0 * panel);
    return body + mean * radial_tail(end);
  };
  if (dim == 1) return along(make_point(1.0), L) + along(make_point(-1.0), L);
  return angular_integral(c, L, [&](double th) {
    return along(make_point(std::cos(th), std::sin(th)), exit_distance(c, L, th));
  });
}

}  // namespace nlh
