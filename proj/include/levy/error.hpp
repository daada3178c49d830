#pragma once

#include <stdexcept>
#include <string>

namespace levy {

// Base for all library failures. Subclasses map onto distinct CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or malformed input (distribution specs, configs, ranges).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The distinguished logarithm could not be followed along the grid.
class UnwrapError : public Error {
 public:
  using Error::Error;
};

// A structural property of a computed object failed (Hermitian symmetry,
// positive-definiteness bound, nonnegative total mass).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A numerical scheme did not reach the requested accuracy.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace levy
