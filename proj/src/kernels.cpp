#include "nlh/kernels.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "nlh/quadrature.hpp"

namespace nlh {

namespace {

constexpr double kRangeSlack = 1e-12;

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long cell_index(double coord, double cell) { return static_cast<long>(std::floor(coord / cell)); }

struct Sampler {
  std::mt19937_64 rng;
  SampleBox box;
  int dim;

  Point point() {
    std::uniform_real_distribution<double> u(-box.half_width, box.half_width);
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = u(rng);
    return p;
  }
  double time() {
    std::uniform_real_distribution<double> u(box.t_min, box.t_max);
    return u(rng);
  }
  Point distinct_from(const Point& x) {
    Point y = point();
    while ((y - x).norm() < 1e-6) y = point();
    return y;
  }
};

}  // namespace

void FracParams::validate() const {
  if (dim != 1 && dim != 2) throw PreconditionError("dimension must be 1 or 2");
  if (!(alpha_floor > 0.0 && alpha_floor < 2.0)) throw PreconditionError("alpha floor must lie in (0, 2)");
  if (!(alpha >= alpha_floor && alpha < 2.0)) throw PreconditionError("alpha must lie in [alpha_floor, 2)");
  if (!(lambda > 0.0 && Lambda >= lambda)) throw PreconditionError("need 0 < lambda <= Lambda");
}

std::string to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::constant: return "constant";
    case CoefficientKind::checkerboard: return "checkerboard";
    case CoefficientKind::time_oscillating: return "time_oscillating";
    case CoefficientKind::random_piecewise: return "random_piecewise";
    case CoefficientKind::custom: return "custom";
  }
  return "unknown";
}

CoefficientRule CoefficientRule::constant(double value) {
  CoefficientRule r;
  r.kind_ = CoefficientKind::constant;
  r.low_ = r.high_ = value;
  return r;
}

CoefficientRule CoefficientRule::checkerboard(double cell_size, double low, double high) {
  if (!(cell_size > 0.0)) throw PreconditionError("checkerboard cell size must be positive");
  CoefficientRule r;
  r.kind_ = CoefficientKind::checkerboard;
  r.cell_ = cell_size;
  r.low_ = low;
  r.high_ = high;
  return r;
}

CoefficientRule CoefficientRule::time_oscillating(double period, double low, double high) {
  if (!(period > 0.0)) throw PreconditionError("oscillation period must be positive");
  CoefficientRule r;
  r.kind_ = CoefficientKind::time_oscillating;
  r.period_ = period;
  r.low_ = low;
  r.high_ = high;
  return r;
}

CoefficientRule CoefficientRule::random_piecewise(std::uint64_t seed, double cell_size, double low,
                                                  double high) {
  if (!(cell_size > 0.0)) throw PreconditionError("random cell size must be positive");
  CoefficientRule r;
  r.kind_ = CoefficientKind::random_piecewise;
  r.seed_ = seed;
  r.cell_ = cell_size;
  r.low_ = low;
  r.high_ = high;
  return r;
}

CoefficientRule CoefficientRule::custom(SpatialFn fn, double low, double high) {
  CoefficientRule r;
  r.kind_ = CoefficientKind::custom;
  r.custom_ = std::move(fn);
  r.low_ = low;
  r.high_ = high;
  return r;
}

double CoefficientRule::time_factor(double t) const {
  if (kind_ != CoefficientKind::time_oscillating) return 1.0;
  return low_ + (high_ - low_) * 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * t / period_));
}

double CoefficientRule::cell_value(const Point& x) const {
  std::uint64_t h = splitmix(seed_);
  for (int i = 0; i < x.size(); ++i)
    h = splitmix(h ^ static_cast<std::uint64_t>(cell_index(x[i], cell_)));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return low_ + (high_ - low_) * u;
}

double CoefficientRule::spatial(const Point& x, const Point& y) const {
  switch (kind_) {
    case CoefficientKind::constant: return low_;
    case CoefficientKind::time_oscillating: return 1.0;
    case CoefficientKind::checkerboard: {
      long px = 0, py = 0;
      for (int i = 0; i < x.size(); ++i) {
        px += cell_index(x[i], cell_);
        py += cell_index(y[i], cell_);
      }
      return ((px - py) % 2 == 0) ? low_ : high_;
    }
    case CoefficientKind::random_piecewise: return 0.5 * (cell_value(x) + cell_value(y));
    case CoefficientKind::custom: return custom_(x, y);
  }
  return 1.0;
}

double CoefficientRule::far_spatial() const {
  switch (kind_) {
    case CoefficientKind::constant: return low_;
    case CoefficientKind::time_oscillating: return 1.0;
    default: return 0.5 * (low_ + high_);
  }
}

void KernelSpec::validate() const {
  params.validate();
  if (is_axes()) {
    if (params.dim != 2) throw PreconditionError("axes kernel requires d = 2");
    if (coefficient.kind() != CoefficientKind::constant || coefficient.low() != 1.0)
      throw PreconditionError("axes kernel admits only the constant coefficient 1");
    return;
  }
  if (coefficient.low() < params.lambda - kRangeSlack)
    throw PreconditionError("coefficient lower value below lambda");
  if (coefficient.high() > params.Lambda + kRangeSlack)
    throw PreconditionError("coefficient upper value above Lambda");
  if (coefficient.low() > coefficient.high()) throw PreconditionError("coefficient low exceeds high");
}

KernelSpec fractional_kernel(int dim, double alpha, double lambda, double Lambda) {
  KernelSpec s;
  s.params.dim = dim;
  s.params.alpha = alpha;
  s.params.alpha_floor = std::min(alpha, 0.5);
  s.params.lambda = lambda;
  s.params.Lambda = Lambda;
  s.coefficient = CoefficientRule::constant(1.0);
  return s;
}

KernelSpec axes_kernel(double alpha) {
  KernelSpec s = fractional_kernel(2, alpha);
  s.structure = KernelStructure::axes_singular;
  return s;
}

double eval_kernel(const KernelSpec& spec, double t, const Point& x, const Point& y) {
  if (spec.is_axes()) throw StructureError("the axes measure has no pointwise density");
  const double r = (x - y).norm();
  if (!(r > 0.0)) throw SingularityError("kernel evaluated on the diagonal x = y");
  return spec.coefficient(t, x, y) * fractional_density(spec.params.dim, spec.params.alpha, r);
}

ConditionReport check_bounds(const KernelSpec& spec, std::size_t budget, std::uint64_t seed,
                             SampleBox box) {
  if (spec.is_axes()) throw StructureError("bounds check needs a kernel density");
  Sampler s{std::mt19937_64(seed), box, spec.params.dim};
  ConditionReport rep;
  rep.condition = "bounds";
  rep.measured_min = std::numeric_limits<double>::infinity();
  rep.measured_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < budget; ++k) {
    const double t = s.time();
    const Point x = s.point();
    const Point y = s.distinct_from(x);
    const double ratio =
        eval_kernel(spec, t, x, y) / fractional_density(spec.params.dim, spec.params.alpha, (x - y).norm());
    rep.measured_min = std::min(rep.measured_min, ratio);
    rep.measured_max = std::max(rep.measured_max, ratio);
  }
  rep.samples = budget;
  rep.constant = rep.measured_max;
  rep.threshold = spec.params.Lambda;
  rep.pass = budget > 0 && rep.measured_min >= spec.params.lambda - kRangeSlack &&
             rep.measured_max <= spec.params.Lambda + kRangeSlack;
  rep.note = "ratio K / ((2 - alpha)|x - y|^{-d - alpha}) must lie in [lambda, Lambda]";
  return rep;
}

ConditionReport check_symmetry(const KernelSpec& spec, std::size_t budget, std::uint64_t seed,
                               SampleBox box) {
  if (spec.is_axes()) throw StructureError("symmetry check needs a kernel density");
  Sampler s{std::mt19937_64(seed), box, spec.params.dim};
  ConditionReport rep;
  rep.condition = "symmetry";
  double worst = 0.0;
  for (std::size_t k = 0; k < budget; ++k) {
    const double t = s.time();
    const Point x = s.point();
    const Point y = s.distinct_from(x);
    const double kxy = eval_kernel(spec, t, x, y);
    const double kyx = eval_kernel(spec, t, y, x);
    worst = std::max(worst, std::abs(kxy - kyx) / kxy);
  }
  rep.samples = budget;
  rep.measured_min = 0.0;
  rep.measured_max = worst;
  rep.constant = worst;
  rep.threshold = 1e-12;
  rep.pass = worst <= rep.threshold;
  rep.note = "max relative deviation |K(x,y) - K(y,x)| / K(x,y)";
  return rep;
}

double cutoff_integral(const KernelSpec& spec, double t, const Point& x, double rho) {
  if (spec.is_axes()) throw StructureError("cutoff integral needs a kernel density");
  if (!(rho > 0.0)) throw PreconditionError("cutoff radius must be positive");
  const int d = spec.params.dim;
  const double a = spec.params.alpha;
  const double scale = (2.0 - a) / a;
  if (spec.coefficient.spatially_constant())
    return spec.coefficient(t, x, x) * scale * sphere_measure(d) * std::pow(rho, -a);
  // With s = r^{-alpha} the radial integral becomes (2 - alpha)/alpha * int_0^{rho^-alpha} a ds,
  // a bounded (possibly discontinuous) integrand; a fine midpoint rule handles the jumps.
  const double smax = std::pow(rho, -a);
  const int ns = 2048;
  const double ds = smax / ns;
  auto radial = [&](const Point& dir) {
    double acc = 0.0;
    for (int k = 0; k < ns; ++k) {
      const double s = (k + 0.5) * ds;
      const double r = std::pow(s, -1.0 / a);
      acc += spec.coefficient(t, x, Point(x + r * dir));
    }
    return acc * ds;
  };
  if (d == 1) return scale * (radial(make_point(1.0)) + radial(make_point(-1.0)));
  const int nth = 256;
  double acc = 0.0;
  for (int j = 0; j < nth; ++j) {
    const double th = 2.0 * std::numbers::pi * (j + 0.5) / nth;
    acc += radial(make_point(std::cos(th), std::sin(th)));
  }
  return scale * acc * 2.0 * std::numbers::pi / nth;
}

ConditionReport check_cutoff(const KernelSpec& spec, const std::vector<double>& radii,
                             std::size_t budget, std::uint64_t seed, SampleBox box) {
  if (radii.empty()) throw PreconditionError("cutoff check needs at least one radius");
  for (double r : radii)
    if (!(r > 0.0)) throw PreconditionError("cutoff radii must be positive");
  Sampler s{std::mt19937_64(seed), box, spec.params.dim};
  ConditionReport rep;
  rep.condition = "cutoff";
  rep.measured_min = std::numeric_limits<double>::infinity();
  rep.measured_max = 0.0;
  const std::size_t per = std::max<std::size_t>(1, budget);
  for (std::size_t k = 0; k < per; ++k) {
    const double t = s.time();
    const Point x = s.point();
    for (double rho : radii) {
      const double v = std::pow(rho, spec.params.alpha) * cutoff_integral(spec, t, x, rho);
      rep.measured_min = std::min(rep.measured_min, v);
      rep.measured_max = std::max(rep.measured_max, v);
      ++rep.samples;
    }
  }
  const double a = spec.params.alpha;
  rep.constant = rep.measured_max;
  rep.threshold = spec.params.Lambda * (2.0 - a) * sphere_measure(spec.params.dim) / a;
  rep.pass = rep.constant <= rep.threshold * (1.0 + 1e-9);
  rep.note = "sup rho^alpha * int_{|y - x| > rho} K(t; x, y) dy";
  return rep;
}

double ujs_ratio(const KernelSpec& spec, double t, const Point& x, const Point& y, double r) {
  if (spec.is_axes()) throw StructureError("UJS check needs a kernel density");
  const double dist = (x - y).norm();
  if (!(r > 0.0) || r > 0.25 * dist + 1e-15) throw PreconditionError("UJS radius must satisfy 0 < r <= |x - y| / 4");
  const double kxy = eval_kernel(spec, t, x, y);
  auto k = [&](const Point& z) { return eval_kernel(spec, t, z, y); };
  double avg = 0.0;
  const int panels = 16;
  if (spec.params.dim == 1) {
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double a0 = x[0] - r + 2.0 * r * p / panels;
      const double b0 = a0 + 2.0 * r / panels;
      acc += quad::gauss<10>([&](double z) { return k(make_point(z)); }, a0, b0);
    }
    avg = acc / (2.0 * r);
  } else {
    // polar coordinates about x, area weight rho
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double r0 = r * p / panels, r1 = r * (p + 1) / panels;
      acc += quad::gauss2<10>(
          [&](double rho, double th) {
            return rho * k(make_point(x[0] + rho * std::cos(th), x[1] + rho * std::sin(th)));
          },
          r0, r1, 0.0, 2.0 * std::numbers::pi);
    }
    avg = acc / (std::numbers::pi * r * r);
  }
  return kxy / avg;
}

ConditionReport check_ujs(const KernelSpec& spec, std::size_t budget, std::uint64_t seed,
                          double ceiling, SampleBox box) {
  Sampler s{std::mt19937_64(seed), box, spec.params.dim};
  ConditionReport rep;
  rep.condition = "ujs";
  rep.measured_min = std::numeric_limits<double>::infinity();
  rep.measured_max = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < budget; ++k) {
    const double t = s.time();
    const Point x = s.point();
    const Point y = s.distinct_from(x);
    const double r = std::min(0.25, 0.25 * (x - y).norm());
    const double q = ujs_ratio(spec, t, x, y, r);
    finite = finite && std::isfinite(q);
    rep.measured_min = std::min(rep.measured_min, q);
    rep.measured_max = std::max(rep.measured_max, q);
  }
  const auto& p = spec.params;
  rep.samples = budget;
  rep.constant = rep.measured_max;
  rep.threshold = ceiling > 0.0 ? ceiling : p.Lambda / p.lambda * std::pow(4.0, p.dim + p.alpha);
  rep.pass = finite && budget > 0 && rep.constant <= rep.threshold;
  rep.note = "max K(t;x,y) / mean_{B_r(x)} K(t;.,y), r = min(1/4, |x - y|/4)";
  return rep;
}

}  // namespace nlh
