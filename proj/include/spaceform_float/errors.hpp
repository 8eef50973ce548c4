#pragma once

#include <stdexcept>
#include <string>

namespace spaceform {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a model function (tan^λ range,
/// model ball, spherical radius cap).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A violated precondition that is not a domain issue (non-nested bodies,
/// grids that do not positively span, malformed bodies).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The halfspace intersection defining a Wulff shape is empty.
class EmptyWulff : public Error {
 public:
  using Error::Error;
};

/// δ is not admissible: δ^{(n+1)/2} ≥ μ(K).
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Requested quadrature tolerance could not be met.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace spaceform
