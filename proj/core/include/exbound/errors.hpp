#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exbound {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid numeric or structural parameter (radius, counts, theta, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Coefficient matrix that is not symmetric positive definite.
class CoefficientError : public Error {
 public:
  using Error::Error;
};

// Conflicting or out-of-range constraint entries.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

// Iterative solver hit its iteration limit.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations, double relative_residual);
  std::size_t iterations() const noexcept { return iterations_; }
  double relative_residual() const noexcept { return relative_residual_; }

 private:
  std::size_t iterations_;
  double relative_residual_;
};

// Operation called on an object of the wrong kind (scalar vs vector space, wrong geometry).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable data values.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace exbound
