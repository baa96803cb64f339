#pragma once

#include <stdexcept>
#include <string>

namespace genequo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, long expected, long actual)
      : Error(what + ": expected dimension " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

/// Iterative projection did not reach tolerance within its sweep budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// No descent candidate met the contraction target.
class Stall : public Error {
 public:
  using Error::Error;
};

/// A step radius reached the locality radius of a local certificate.
class LocalityExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (problem spec, expression string).
class InputError : public Error {
 public:
  InputError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace genequo
