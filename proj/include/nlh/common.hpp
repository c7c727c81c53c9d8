#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nlh {

/// A point in R^d for d in {1, 2}. Fixed maximum size, so no heap traffic.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Point make_point(double x) {
  Point p(1);
  p << x;
  return p;
}

inline Point make_point(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

inline Point origin(int dim) { return Point::Zero(dim); }

/// Surface measure of the unit sphere in R^d.
inline double sphere_measure(int dim) { return dim == 1 ? 2.0 : 2.0 * std::numbers::pi; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel evaluated on its diagonal.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for this kernel structure (axes vs density).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Violated precondition on geometry, resolution or arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// CFL violation, non-finite state or failed linear solve during time stepping.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::ptrdiff_t step) : Error(what), step_(step) {}
  std::ptrdiff_t step() const { return step_; }

 private:
  std::ptrdiff_t step_;
};

/// Configuration rejected during schema validation. `key` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace nlh
