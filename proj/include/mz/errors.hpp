#pragma once

#include <stdexcept>
#include <string>

namespace mz {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A ConvexBody that is not a valid compact convex set (empty vertex list,
/// negative radius, mixed dimensions).
class InvalidBody : public Error {
 public:
  using Error::Error;
};

/// Malformed FLD1 files or configuration documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure stopped before reaching its tolerance.
class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The truncation iteration stopped contracting.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace mz
