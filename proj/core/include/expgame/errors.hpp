#pragma once

#include <stdexcept>
#include <string>

namespace expgame {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters violate a hard invariant (CLI exit code 2).
class InvalidParams : public Error {
 public:
  using Error::Error;
};

// An iterative or bracketing method failed to converge (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Operation called outside its precondition, e.g. a regime mismatch
// (CLI exit code 4).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function (p in {0,1} for
// odds ratios, negative times, ...). Reported like a precondition failure.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A contract design problem has no solution for the requested free parameter.
class DesignError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace expgame
