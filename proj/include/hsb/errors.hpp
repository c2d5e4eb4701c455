#ifndef HSB_ERRORS_HPP
#define HSB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hsb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Eigenvector matrix condition number exceeded the EP threshold, or the
/// matrix is outright defective. Signals an exceptional point.
struct NonDiagonalizable : Error {
  NonDiagonalizable(const std::string& msg, double cond)
      : Error(msg), condition_number(cond) {}
  double condition_number;
};

/// Spectrum has non-real eigenvalues; stationary metric construction invalid.
struct ComplexSpectrum : Error {
  using Error::Error;
};

struct SingularOperator : Error {
  using Error::Error;
};

/// Parameter transport hit a non-diagonalizable point in the interior of a path.
struct EPOnPath : Error {
  EPOnPath(const std::string& msg, double q) : Error(msg), location(q) {}
  double location;
};

/// Evaluation outside a family's declared domain (pole, invalid stencil, ...).
struct DomainError : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

/// Metric lost positive definiteness during integration.
struct PositivityLost : Error {
  using Error::Error;
};

struct DegenerateLevel : Error {
  using Error::Error;
};

}  // namespace hsb

#endif
