#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzyrand {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented precondition (negative entry, N mismatch, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV / JSON input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A model/input combination that is not supported (e.g. CAT on fuzzy data).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The adjustment denominator max[RI] - E[RI] vanished.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A request outside the numeric range a routine supports (exact Stirling ratio for huge N).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Fixed-point iteration ran out of iterations. The last iterate is kept for diagnosis.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : Error(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

}  // namespace fuzzyrand
