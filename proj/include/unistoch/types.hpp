#ifndef UNISTOCH_TYPES_HPP
#define UNISTOCH_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace unistoch {

using complex = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using rmat = Eigen::MatrixXd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

// Base class for everything this library throws on bad input or bad state.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape or index mismatch.
class DimensionError : public Error {
public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// A domain invariant failed (non-stochastic column, non-unitary matrix, ...).
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A matrix required to be invertible is singular to working precision.
class SingularityError : public ValidationError {
public:
  SingularityError(const std::string& what, double smallest_singular_value)
      : ValidationError(what), smallest_singular_value_(smallest_singular_value) {}
  double smallest_singular_value() const { return smallest_singular_value_; }

private:
  double smallest_singular_value_;
};

// Thrown when a density matrix expected to be pure has a second eigenvalue
// above the rank-one tolerance.
class NotRankOneError : public ValidationError {
public:
  NotRankOneError(const std::string& what, double second_eigenvalue)
      : ValidationError(what), second_eigenvalue_(second_eigenvalue) {}
  double second_eigenvalue() const { return second_eigenvalue_; }

private:
  double second_eigenvalue_;
};

// Numerical comparison tolerances. `alg` bounds deviations in algebraic
// identities on matrices; `integ` bounds ODE-integration comparisons.
struct Tolerance {
  double alg = 1e-10;
  double integ = 1e-6;

  static Tolerance defaults() { return Tolerance{}; }

  void validate() const {
    if (!(alg > 0.0 && alg < 1.0) || !(integ > 0.0 && integ < 1.0)) {
      throw ValidationError("Tolerance: values must lie strictly in (0, 1)");
    }
  }
};

// Boolean answer plus the worst measured deviation backing it.
struct Verdict {
  bool ok = false;
  double max_deviation = 0.0;

  explicit operator bool() const { return ok; }
};

}  // namespace unistoch

#endif
