#include "nlh/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nlh {

using nlohmann::json;

namespace {

/// Object reader that tracks consumed keys so leftovers can be rejected.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) const { return j_.contains(k); }

  const json& raw(const std::string& k) {
    seen_.insert(k);
    if (!j_.contains(k)) throw ConfigError(key(k), "missing required key");
    return j_.at(k);
  }

  double number(const std::string& k) {
    const json& v = raw(k);
    if (!v.is_number()) throw ConfigError(key(k), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& k, double def) { return has(k) ? number(k) : (seen_.insert(k), def); }

  long long integer(const std::string& k) {
    const json& v = raw(k);
    if (!v.is_number_integer()) throw ConfigError(key(k), "expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& k, long long def) { return has(k) ? integer(k) : (seen_.insert(k), def); }

  std::uint64_t unsigned_integer(const std::string& k, std::uint64_t def) {
    if (!has(k)) return seen_.insert(k), def;
    const json& v = raw(k);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError(key(k), "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& k) {
    const json& v = raw(k);
    if (!v.is_string()) throw ConfigError(key(k), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& k, const std::string& def) { return has(k) ? string(k) : (seen_.insert(k), def); }

  std::vector<double> numbers(const std::string& k) {
    const json& v = raw(k);
    if (!v.is_array()) throw ConfigError(key(k), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(key(k) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  std::vector<double> numbers(const std::string& k, std::vector<double> def) { return has(k) ? numbers(k) : (seen_.insert(k), def); }

  Point point(const std::string& k, int dim) {
    const auto v = numbers(k);
    if (static_cast<int>(v.size()) != dim) throw ConfigError(key(k), "expected " + std::to_string(dim) + " coordinates");
    return dim == 1 ? make_point(v[0]) : make_point(v[0], v[1]);
  }
  Point point(const std::string& k, int dim, const Point& def) { return has(k) ? point(k, dim) : (seen_.insert(k), def); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

json point_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

TimeProfile parse_profile(const json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.string("kind");
  TimeProfile p;
  if (kind == "one") p = TimeProfile::one();
  else if (kind == "linear") p = TimeProfile::linear();
  else if (kind == "log_sq") p = TimeProfile::log_sq();
  else if (kind == "log_sq_derivative") p = TimeProfile::log_sq_derivative();
  else if (kind == "step") p = TimeProfile::step(r.number("a"));
  else if (kind == "pulse") {
    p = TimeProfile::pulse(r.number("a"), r.number("b"));
    check(p.a < p.b, r.key("b"), "pulse needs a < b");
  } else {
    throw ConfigError(r.key("kind"), "unknown time profile '" + kind + "'");
  }
  r.finish();
  return p;
}

json profile_json(const TimeProfile& p) {
  json j{{"kind", to_string(p.kind)}};
  if (p.kind == TimeProfile::Kind::step) j["a"] = p.a;
  if (p.kind == TimeProfile::Kind::pulse) {
    j["a"] = p.a;
    j["b"] = p.b;
  }
  return j;
}

DataRule parse_rule(const json& j, const std::string& path, int dim) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of data terms");
  DataRule rule;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Reader r(j[i], path + "[" + std::to_string(i) + "]");
    const std::string kind = r.string("kind");
    const double amp = r.number("amplitude", 1.0);
    const TimeProfile prof = r.has("profile") ? parse_profile(r.raw("profile"), r.key("profile")) : TimeProfile::one();
    if (kind == "constant") {
      rule = rule + DataRule::constant(amp, prof);
    } else if (kind == "cosine") {
      const auto c = r.numbers("cos_amp");
      check(static_cast<int>(c.size()) == dim, r.key("cos_amp"), "expected one amplitude per dimension");
      DataRule d = DataRule::cosine(c[0], dim == 2 ? c[1] : 0.0, prof);
      rule = rule + d.scaled(amp);
    } else if (kind == "annulus") {
      const Point c = r.point("center", dim);
      const double in = r.number("inner"), out = r.number("outer");
      check(in >= 0.0 && out > in, r.key("outer"), "annulus needs 0 <= inner < outer");
      rule = rule + DataRule::annulus(c, in, out, amp, prof);
    } else if (kind == "ball") {
      const Point c = r.point("center", dim);
      const double rad = r.number("radius");
      check(rad > 0.0, r.key("radius"), "must be positive");
      rule = rule + DataRule::ball(c, rad, amp, prof);
    } else if (kind == "gaussian") {
      const Point c = r.point("center", dim);
      const double s = r.number("sigma");
      check(s > 0.0, r.key("sigma"), "must be positive");
      rule = rule + DataRule::gaussian(c, s, amp, prof);
    } else {
      throw ConfigError(r.key("kind"), "unknown data term '" + kind + "'");
    }
    r.finish();
  }
  return rule;
}

CoefficientRule parse_coefficient(const json& j, const std::string& path, std::uint64_t default_seed) {
  Reader r(j, path);
  const std::string kind = r.string("kind");
  CoefficientRule c = CoefficientRule::constant(1.0);
  if (kind == "constant") {
    c = CoefficientRule::constant(r.number("value", 1.0));
  } else if (kind == "checkerboard") {
    const double cell = r.number("cell_size");
    check(cell > 0.0, r.key("cell_size"), "must be positive");
    c = CoefficientRule::checkerboard(cell, r.number("low"), r.number("high"));
  } else if (kind == "time_oscillating") {
    const double per = r.number("period");
    check(per > 0.0, r.key("period"), "must be positive");
    c = CoefficientRule::time_oscillating(per, r.number("low"), r.number("high"));
  } else if (kind == "random_piecewise") {
    const std::uint64_t seed = r.unsigned_integer("seed", default_seed);
    const double cell = r.number("cell_size");
    check(cell > 0.0, r.key("cell_size"), "must be positive");
    c = CoefficientRule::random_piecewise(seed, cell, r.number("low"), r.number("high"));
  } else {
    throw ConfigError(r.key("kind"), "unknown coefficient '" + kind + "'");
  }
  check(c.low() > 0.0 && c.high() >= c.low(), r.key("low"), "need 0 < low <= high");
  r.finish();
  return c;
}

KernelSpec parse_kernel(const json& j, std::uint64_t seed) {
  Reader r(j, "kernel");
  KernelSpec k;
  k.params.dim = static_cast<int>(r.integer("dim"));
  check(k.params.dim == 1 || k.params.dim == 2, r.key("dim"), "must be 1 or 2");
  k.params.alpha = r.number("alpha");
  check(k.params.alpha > 0.0 && k.params.alpha < 2.0, r.key("alpha"), "must lie in (0, 2)");
  k.params.alpha_floor = r.number("alpha_floor", std::min(k.params.alpha, 0.5));
  k.params.lambda = r.number("lambda", 1.0);
  k.params.Lambda = r.number("Lambda", 1.0);
  const std::string st = r.string("structure", "density");
  if (st == "density") k.structure = KernelStructure::absolutely_continuous;
  else if (st == "axes") k.structure = KernelStructure::axes_singular;
  else throw ConfigError(r.key("structure"), "must be 'density' or 'axes'");
  k.coefficient = r.has("coefficient") ? parse_coefficient(r.raw("coefficient"), r.key("coefficient"), seed)
                                       : CoefficientRule::constant(1.0);
  r.finish();
  try {
    k.params.validate();
    k.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError("kernel", e.what());
  }
  return k;
}

GridSpec parse_grid(const json& j, const std::string& path, int dim) {
  Reader r(j, path);
  GridSpec g;
  g.dim = dim;
  const std::string shape = r.string("shape", "box");
  if (shape == "box") g.shape = DomainShape::box;
  else if (shape == "ball") g.shape = DomainShape::ball;
  else throw ConfigError(r.key("shape"), "must be 'box' or 'ball'");
  g.half_width = r.number("half_width", 1.0);
  check(g.half_width > 0.0, r.key("half_width"), "must be positive");
  g.r_trunc = r.number("r_trunc", 3.0 * g.half_width);
  check(g.r_trunc >= 3.0 * g.half_width - 1e-12, r.key("r_trunc"), "must be at least 3 * half_width");
  g.h = r.number("h");
  check(g.h > 0.0 && g.h < g.half_width, r.key("h"), "must lie in (0, half_width)");
  r.finish();
  return g;
}

json grid_json(const GridSpec& g) {
  return {{"shape", g.shape == DomainShape::box ? "box" : "ball"},
          {"half_width", g.half_width},
          {"r_trunc", g.r_trunc},
          {"h", g.h}};
}

Scheme parse_scheme(const std::string& s, const std::string& key) {
  if (s == "implicit") return Scheme::implicit_euler;
  if (s == "explicit") return Scheme::explicit_euler;
  throw ConfigError(key, "must be 'implicit' or 'explicit'");
}

ScenarioConfig parse_scenario(const json& j, int dim) {
  Reader r(j, "scenario");
  ScenarioConfig s;
  s.t_start = r.number("t_start", 0.0);
  s.t_end = r.number("t_end");
  check(s.t_end > s.t_start, r.key("t_end"), "must exceed t_start");
  s.initial = r.has("initial") ? parse_rule(r.raw("initial"), r.key("initial"), dim) : DataRule{};
  s.exterior = r.has("exterior") ? parse_rule(r.raw("exterior"), r.key("exterior"), dim) : DataRule{};
  s.source = r.has("source") ? parse_rule(r.raw("source"), r.key("source"), dim) : DataRule{};
  {
    Reader q(r.raw("schedule"), r.key("schedule"));
    s.schedule.kind = q.string("kind", "uniform");
    s.schedule.dt = q.number("dt");
    check(s.schedule.dt > 0.0, q.key("dt"), "must be positive");
    if (s.schedule.kind == "graded") {
      s.schedule.k_max = static_cast<int>(q.integer("k_max"));
      s.schedule.substeps = static_cast<int>(q.integer("substeps", 8));
      check(s.schedule.k_max >= 1 && s.schedule.k_max <= 60, q.key("k_max"), "must lie in [1, 60]");
      check(s.schedule.substeps >= 1, q.key("substeps"), "must be positive");
      check(s.t_start < 0.0 && s.t_end > 0.0 && s.t_end < 1.0, q.key("kind"),
            "graded schedules need t_start < 0 < t_end < 1");
    } else if (s.schedule.kind != "uniform") {
      throw ConfigError(q.key("kind"), "must be 'uniform' or 'graded'");
    }
    q.finish();
  }
  s.scheme = parse_scheme(r.string("scheme", "implicit"), r.key("scheme"));
  s.cfl_factor = r.number("cfl_factor", 0.9);
  check(s.cfl_factor > 0.0 && s.cfl_factor <= 1.0, r.key("cfl_factor"), "must lie in (0, 1]");
  const long long stride = r.integer("stride", 1);
  check(stride >= 1, r.key("stride"), "must be positive");
  s.stride = static_cast<std::size_t>(stride);
  r.finish();
  return s;
}

const std::set<std::string> kOps{"harnack", "harnack_tails", "weak_harnack", "local_boundedness", "holder",
                                 "axes_harnack"};

void check_gammas(const std::vector<double>& g, const std::string& key) {
  check(!g.empty(), key, "must not be empty");
  for (double v : g) check(v > 0.0 && v < 1.0, key, "every gamma must lie in (0, 1)");
}

MeasurementConfig parse_measurement(const json& j, const std::string& path, int dim) {
  Reader r(j, path);
  MeasurementConfig m;
  m.op = r.string("op");
  check(kOps.count(m.op) > 0, r.key("op"), "unknown inequality '" + m.op + "'");
  m.t0 = r.number("t0");
  m.x0 = r.point("x0", dim, Point::Zero(dim));
  m.R = r.number("R");
  check(m.R > 0.0, r.key("R"), "must be positive");
  m.gammas = r.numbers("gammas", m.gammas);
  check_gammas(m.gammas, r.key("gammas"));
  m.epsilon = r.number("epsilon", m.epsilon);
  check(m.epsilon > 0.0, r.key("epsilon"), "must be positive");
  r.finish();
  return m;
}

SweepConfig parse_sweep(const json& j, int dim, std::uint64_t seed) {
  Reader r(j, "sweep");
  SweepConfig s;
  s.alpha = r.numbers("alpha");
  check(!s.alpha.empty(), r.key("alpha"), "must not be empty");
  for (double a : s.alpha) check(a > 0.0 && a < 2.0, r.key("alpha"), "every alpha must lie in (0, 2)");
  s.R = r.numbers("R");
  check(!s.R.empty(), r.key("R"), "must not be empty");
  for (double v : s.R) check(v > 0.0, r.key("R"), "every R must be positive");
  const json& cs = r.raw("coefficients");
  check(cs.is_array() && !cs.empty(), r.key("coefficients"), "expected a nonempty array");
  for (std::size_t i = 0; i < cs.size(); ++i)
    s.coefficients.push_back(parse_coefficient(cs[i], r.key("coefficients") + "[" + std::to_string(i) + "]", seed));
  if (r.has("seeds")) {
    const json& sd = r.raw("seeds");
    check(sd.is_array() && !sd.empty(), r.key("seeds"), "expected a nonempty array");
    s.seeds.clear();
    for (const auto& v : sd) {
      check(v.is_number_integer() && v.get<long long>() >= 0, r.key("seeds"), "expected nonnegative integers");
      s.seeds.push_back(v.get<std::uint64_t>());
    }
  } else {
    s.seeds = {seed};
  }
  if (r.has("inequalities")) {
    const json& q = r.raw("inequalities");
    check(q.is_array() && !q.empty(), r.key("inequalities"), "expected a nonempty array");
    s.inequalities.clear();
    for (const auto& v : q) {
      check(v.is_string() && kOps.count(v.get<std::string>()) && v.get<std::string>() != "axes_harnack",
            r.key("inequalities"), "unknown or unsupported inequality");
      s.inequalities.push_back(v.get<std::string>());
    }
  }
  s.x0 = r.point("x0", dim, Point::Zero(dim));
  s.steps_per_cylinder = static_cast<int>(r.integer("steps_per_cylinder", 16));
  check(s.steps_per_cylinder >= 4, r.key("steps_per_cylinder"), "must be at least 4");
  s.gammas = r.numbers("gammas", s.gammas);
  check_gammas(s.gammas, r.key("gammas"));
  s.epsilon = r.number("epsilon", s.epsilon);
  check(s.epsilon > 0.0, r.key("epsilon"), "must be positive");
  r.finish();
  return s;
}

CounterexampleConfig parse_counterexample(const json& j) {
  Reader r(j, "counterexample");
  CounterexampleConfig c;
  auto& s = c.spec;
  s.params.dim = static_cast<int>(r.integer("dim", 1));
  check(s.params.dim == 1 || s.params.dim == 2, r.key("dim"), "must be 1 or 2");
  s.params.alpha = r.number("alpha", 1.0);
  check(s.params.alpha > 0.0 && s.params.alpha < 2.0, r.key("alpha"), "must lie in (0, 2)");
  s.params.alpha_floor = std::min(s.params.alpha, 0.5);
  s.grid.dim = s.params.dim;
  s.grid.half_width = r.number("half_width", 1.0);
  s.grid.r_trunc = r.number("r_trunc", 4.0);
  s.grid.h = r.number("h", 1.0 / 32.0);
  s.t_start = r.number("t_start", -1.0);
  s.t_end = r.number("t_end", 0.5);
  s.dt = r.number("dt", 1.0 / 64.0);
  s.k_max = static_cast<int>(r.integer("k_max", 32));
  s.substeps = static_cast<int>(r.integer("substeps", 8));
  s.delta_factor = r.number("delta_factor", 0.5);
  try {
    s.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError("counterexample", e.what());
  }
  if (r.has("lower_bound_k")) {
    c.lower_bound_k.clear();
    for (double v : r.numbers("lower_bound_k")) c.lower_bound_k.push_back(static_cast<int>(v));
  }
  for (int k : c.lower_bound_k) check(k >= 0 && k <= s.k_max, r.key("lower_bound_k"), "entries must lie in [0, k_max]");
  c.k_lo = static_cast<int>(r.integer("k_lo", c.k_lo));
  c.k_hi = static_cast<int>(r.integer("k_hi", c.k_hi));
  check(c.k_lo >= 1 && c.k_hi <= s.k_max, r.key("k_hi"), "need 1 <= k_lo and k_hi <= k_max");
  check(c.k_hi - c.k_lo + 1 >= 6, r.key("k_hi"), "need at least 6 dyadic levels");
  check(std::ldexp(1.0, -c.k_lo) <= s.t_end, r.key("k_lo"), "2^-k_lo must not exceed t_end");
  c.gammas = r.numbers("gammas", c.gammas);
  for (double g : c.gammas) check(g > 0.0, r.key("gammas"), "every gamma must be positive");
  c.holder_gamma = r.number("holder_gamma", c.holder_gamma);
  check(c.holder_gamma > 0.0 && c.holder_gamma < 1.0, r.key("holder_gamma"), "must lie in (0, 1)");
  c.holder_k_lo = static_cast<int>(r.integer("holder_k_lo", c.holder_k_lo));
  c.holder_k_hi = static_cast<int>(r.integer("holder_k_hi", c.holder_k_hi));
  check(c.holder_k_hi > c.holder_k_lo, r.key("holder_k_hi"), "must exceed holder_k_lo");
  r.finish();
  return c;
}

AxesConfig parse_axes(const json& j) {
  Reader r(j, "axes");
  AxesConfig a;
  a.alpha = r.number("alpha", a.alpha);
  check(a.alpha > 0.0 && a.alpha < 2.0, r.key("alpha"), "must lie in (0, 2)");
  a.grid = parse_grid(r.raw("grid"), r.key("grid"), 2);
  check(a.grid.shape == DomainShape::box, r.key("grid.shape"), "axes runs need a box");
  a.R = r.number("R", a.R);
  a.x0 = r.point("x0", 2, a.x0);
  a.ball_center = r.point("ball_center", 2);
  a.radii = r.numbers("radii");
  check(!a.radii.empty(), r.key("radii"), "must not be empty");
  for (double v : a.radii) check(v > 0.0, r.key("radii"), "every radius must be positive");
  a.steps_per_cylinder = static_cast<int>(r.integer("steps_per_cylinder", a.steps_per_cylinder));
  check(a.steps_per_cylinder >= 4, r.key("steps_per_cylinder"), "must be at least 4");
  r.finish();
  return a;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  Reader r(j, "");
  ExperimentConfig c;
  c.schema_version = static_cast<int>(r.integer("schema_version"));
  check(c.schema_version == kSchemaVersion, "schema_version", "unsupported version " + std::to_string(c.schema_version));
  c.seed = r.unsigned_integer("seed", 0);
  c.kernel = parse_kernel(r.raw("kernel"), c.seed);
  const int dim = c.kernel.params.dim;
  c.grid = parse_grid(r.raw("grid"), "grid", dim);
  c.scenario = parse_scenario(r.raw("scenario"), dim);
  if (r.has("measurements")) {
    const json& ms = r.raw("measurements");
    check(ms.is_array(), "measurements", "expected an array");
    for (std::size_t i = 0; i < ms.size(); ++i)
      c.measurements.push_back(parse_measurement(ms[i], "measurements[" + std::to_string(i) + "]", dim));
  }
  if (r.has("sweep")) c.sweep = parse_sweep(r.raw("sweep"), dim, c.seed);
  if (r.has("counterexample")) c.counterexample = parse_counterexample(r.raw("counterexample"));
  if (r.has("axes")) c.axes = parse_axes(r.raw("axes"));
  if (r.has("diagnostics")) {
    Reader d(r.raw("diagnostics"), "diagnostics");
    Reader h(d.raw("heat_oracle"), "diagnostics.heat_oracle");
    HeatOracleConfig o;
    o.sigma = h.number("sigma");
    o.radius = h.number("radius");
    check(o.sigma > 0.0, h.key("sigma"), "must be positive");
    check(o.radius > 0.0, h.key("radius"), "must be positive");
    h.finish();
    d.finish();
    c.heat_oracle = o;
  }
  r.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const DataRule& rule) {
  json a = json::array();
  for (const auto& t : rule.terms()) {
    json j{{"kind", to_string(t.kind)}, {"amplitude", t.amplitude}};
    switch (t.kind) {
      case DataTerm::Kind::constant: break;
      case DataTerm::Kind::cosine: {
        json c = json::array();
        for (Eigen::Index i = 0; i < t.center.size(); ++i) c.push_back(t.cos_amp[static_cast<std::size_t>(i)]);
        j["cos_amp"] = c;
        break;
      }
      case DataTerm::Kind::annulus:
        j["center"] = point_json(t.center);
        j["inner"] = t.inner;
        j["outer"] = t.outer;
        break;
      case DataTerm::Kind::ball:
        j["center"] = point_json(t.center);
        j["radius"] = t.outer;
        break;
      case DataTerm::Kind::gaussian:
        j["center"] = point_json(t.center);
        j["sigma"] = t.outer;
        break;
    }
    j["profile"] = profile_json(t.profile);
    a.push_back(j);
  }
  return a;
}

json to_json(const CoefficientRule& c) {
  switch (c.kind()) {
    case CoefficientKind::constant: return {{"kind", "constant"}, {"value", c.low()}};
    case CoefficientKind::checkerboard:
      return {{"kind", "checkerboard"}, {"cell_size", c.cell_size()}, {"low", c.low()}, {"high", c.high()}};
    case CoefficientKind::time_oscillating:
      return {{"kind", "time_oscillating"}, {"period", c.period()}, {"low", c.low()}, {"high", c.high()}};
    case CoefficientKind::random_piecewise:
      return {{"kind", "random_piecewise"}, {"seed", c.seed()},  {"cell_size", c.cell_size()},
              {"low", c.low()},             {"high", c.high()}};
    case CoefficientKind::custom: break;
  }
  throw ConfigError("kernel.coefficient", "custom coefficients cannot be serialized");
}

json to_json(const KernelSpec& k) {
  return {{"dim", k.params.dim},
          {"alpha", k.params.alpha},
          {"alpha_floor", k.params.alpha_floor},
          {"lambda", k.params.lambda},
          {"Lambda", k.params.Lambda},
          {"structure", k.is_axes() ? "axes" : "density"},
          {"coefficient", to_json(k.coefficient)}};
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  j["kernel"] = to_json(c.kernel);
  j["grid"] = grid_json(c.grid);
  const auto& s = c.scenario;
  json sched{{"kind", s.schedule.kind}, {"dt", s.schedule.dt}};
  if (s.schedule.kind == "graded") {
    sched["k_max"] = s.schedule.k_max;
    sched["substeps"] = s.schedule.substeps;
  }
  j["scenario"] = {{"t_start", s.t_start},
                   {"t_end", s.t_end},
                   {"initial", to_json(s.initial)},
                   {"exterior", to_json(s.exterior)},
                   {"source", to_json(s.source)},
                   {"schedule", sched},
                   {"scheme", s.scheme == Scheme::implicit_euler ? "implicit" : "explicit"},
                   {"cfl_factor", s.cfl_factor},
                   {"stride", s.stride}};
  json ms = json::array();
  for (const auto& m : c.measurements)
    ms.push_back({{"op", m.op}, {"t0", m.t0}, {"x0", point_json(m.x0)}, {"R", m.R}, {"gammas", m.gammas},
                  {"epsilon", m.epsilon}});
  j["measurements"] = ms;
  if (c.sweep) {
    const auto& w = *c.sweep;
    json cs = json::array();
    for (const auto& co : w.coefficients) cs.push_back(to_json(co));
    j["sweep"] = {{"alpha", w.alpha},
                  {"R", w.R},
                  {"coefficients", cs},
                  {"seeds", w.seeds},
                  {"inequalities", w.inequalities},
                  {"x0", point_json(w.x0)},
                  {"steps_per_cylinder", w.steps_per_cylinder},
                  {"gammas", w.gammas},
                  {"epsilon", w.epsilon}};
  }
  if (c.counterexample) {
    const auto& ce = *c.counterexample;
    const auto& s2 = ce.spec;
    j["counterexample"] = {{"dim", s2.params.dim},
                           {"alpha", s2.params.alpha},
                           {"half_width", s2.grid.half_width},
                           {"r_trunc", s2.grid.r_trunc},
                           {"h", s2.grid.h},
                           {"t_start", s2.t_start},
                           {"t_end", s2.t_end},
                           {"dt", s2.dt},
                           {"k_max", s2.k_max},
                           {"substeps", s2.substeps},
                           {"delta_factor", s2.delta_factor},
                           {"lower_bound_k", ce.lower_bound_k},
                           {"k_lo", ce.k_lo},
                           {"k_hi", ce.k_hi},
                           {"gammas", ce.gammas},
                           {"holder_gamma", ce.holder_gamma},
                           {"holder_k_lo", ce.holder_k_lo},
                           {"holder_k_hi", ce.holder_k_hi}};
  }
  if (c.axes) {
    const auto& a = *c.axes;
    j["axes"] = {{"alpha", a.alpha},
                 {"grid", grid_json(a.grid)},
                 {"R", a.R},
                 {"x0", point_json(a.x0)},
                 {"ball_center", point_json(a.ball_center)},
                 {"radii", a.radii},
                 {"steps_per_cylinder", a.steps_per_cylinder}};
  }
  if (c.heat_oracle) j["diagnostics"] = {{"heat_oracle", {{"sigma", c.heat_oracle->sigma}, {"radius", c.heat_oracle->radius}}}};
  return j;
}

Scenario make_scenario(const ExperimentConfig& c) {
  Scenario sc;
  sc.kernel = c.kernel;
  sc.grid = make_grid(c.grid);
  sc.initial = c.scenario.initial;
  sc.exterior = c.scenario.exterior;
  sc.source = c.scenario.source;
  const auto& s = c.scenario;
  if (s.schedule.kind == "graded")
    sc.schedule = TimeSchedule::graded(s.t_start, s.t_end, s.schedule.dt, s.schedule.k_max, s.schedule.substeps);
  else
    sc.schedule = TimeSchedule::uniform(s.t_start, s.t_end, s.schedule.dt);
  return sc;
}

SolveOptions make_solve_options(const ExperimentConfig& c) {
  SolveOptions o;
  o.scheme = c.scenario.scheme;
  o.cfl_factor = c.scenario.cfl_factor;
  o.checkpoint_stride = c.scenario.stride;
  return o;
}

}  // namespace nlh
