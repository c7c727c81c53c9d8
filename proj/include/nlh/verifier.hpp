#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nlh/solver.hpp"

namespace nlh {

enum class CylinderKind {
  forward,        ///< I+_R(t0) = (t0, t0 + R^a) x B_R
  backward,       ///< I-_R(t0) = (t0 - R^a, t0) x B_R
  full,           ///< I_R(t0) = (t0 - R^a, t0 + R^a) x B_R
  D,              ///< (t0 - 2R^a, t0) x B_2R
  D_hat,          ///< (t0 - 2R^a, t0) x B_3R
  D_minus,        ///< (t0 - 2R^a, t0 - 2R^a + (R/2)^a) x B_R/2
  D_plus,         ///< (t0 - (R/2)^a, t0) x B_R/2
};

std::string to_string(CylinderKind k);

/// Space-time cylinder. Resolution keeps stored times strictly inside the open
/// time interval and nodes strictly inside the ball.
struct Cylinder {
  CylinderKind kind = CylinderKind::full;
  double t0 = 0.0;
  Point x0 = Point::Zero(1);
  double R = 1.0;
  double alpha = 1.0;

  std::pair<double, double> time_interval() const;
  double ball_radius() const;

  struct Resolution {
    std::vector<std::size_t> times;
    std::vector<std::size_t> nodes;
  };
  /// Throws PreconditionError when no time or no node is resolved.
  Resolution resolve(const SpaceTimeField& u) const;
};

Cylinder make_cylinder(CylinderKind kind, double t0, const Point& x0, double R, double alpha);

struct CylStats {
  double sup = 0.0;
  double inf = 0.0;
  double mean = 0.0;
  double rms = 0.0;
  std::size_t times = 0;
  std::size_t nodes = 0;
};

/// Max, min, mean and root mean square of part(u) over the resolved set. Requires
/// at least 4 time slices and 4 nodes.
CylStats cyl_stats(const SpaceTimeField& u, const Cylinder& c, FarPart part = FarPart::value);

/// Two sides of a measured inequality.
struct Report {
  std::string inequality;
  double left = 0.0;
  double right = 0.0;
  /// left / right; +inf when right = 0 < left, NaN when both vanish.
  double constant = 0.0;
  bool degenerate = false;  ///< left = right = 0
  bool infinite = false;    ///< right = 0 < left
  std::vector<std::pair<std::string, double>> summands;
  std::vector<std::pair<std::string, std::string>> provenance;

  double summand(const std::string& name) const;
  void finish();  ///< computes the constant and flags from left and right
};

/// Common provenance entries of a solution-based report.
std::vector<std::pair<std::string, std::string>> provenance_of(const Solution& s, double t0, const Point& x0, double R);

/// Checks I_{4R}(t0) x B_{4R}(x0) inside the solved region.
void require_containment(const Solution& s, double t0, const Point& x0, double R);

Report harnack_quotient(const Solution& s, double t0, const Point& x0, double R);
Report harnack_with_tails(const Solution& s, double t0, const Point& x0, double R);
Report weak_harnack_ratio(const Solution& s, double t0, const Point& x0, double R);
Report locbd_ratio(const Solution& s, double t0, const Point& x0, double R);
/// One report per gamma.
std::vector<Report> holder_report(const Solution& s, double t0, const Point& x0, double R,
                                  const std::vector<double>& gammas, double epsilon);
Report axes_harnack(const Solution& s, double t0, const Point& x0, double R);

struct IterationResult {
  bool admissible = false;
  double bound = 0.0;
  double tau = 0.0;
  std::vector<double> chain;
  double direct_value = 0.0;  ///< f(R/2) from the samples
  bool holds = false;         ///< bound >= direct_value
  bool hypothesis_holds = false;
  std::string note;
};

/// Iteration lemma: from f(r) <= A (s - r)^{-g1} + B (s - r)^{-g2} + C + theta f(s) for
/// R/2 <= r < s <= R, bounds f(R/2) along r_i = R/2 + (R/2)(1 - tau^i).
IterationResult iterate_absorb(double A, double B, double C, double gamma1, double gamma2, double theta, double R,
                               const std::function<double(double)>& f, std::size_t lattice = 64);

}  // namespace nlh
