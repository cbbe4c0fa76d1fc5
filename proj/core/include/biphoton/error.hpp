#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or argument violates an invariant or precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Geometry that makes an observable undefined (D = 0, D_p1 = 0, ...).
class DegenerateGeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical routine could not meet its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivision depth.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double best_estimate, double achieved_error)
      : NumericalError(what), best_estimate_(best_estimate), achieved_error_(achieved_error) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double best_estimate_;
  double achieved_error_;
};

/// maximize_scalar found a bracket on which the function is not unimodal.
class NotUnimodalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Visibility of a flat interferogram.
class UndefinedVisibilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace biphoton
