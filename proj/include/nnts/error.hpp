#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nnts {

enum class ErrorKind {
  InvalidParameter,
  InvalidSpectrum,
  InvalidArgument,
  NoRealSolution,
  SolverDivergence,
  NotADensity,
  FactorizationUnstable,
  InsufficientData,
  FitFailure,
  SampleTooSmall,
  UnsupportedAlpha,
  CriticalValueUnavailable,
  HarnessError,
  RegressionError,
  IoError,
  ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Newton iteration on the summation system did not converge.
class SolverDivergence : public Error {
 public:
  SolverDivergence(const std::string& what, double last_residual)
      : Error(ErrorKind::SolverDivergence, what), residual_(last_residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// One or more malformed rows in an angle file (1-based row numbers).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::vector<std::size_t> rows)
      : Error(ErrorKind::ParseError, what), rows_(std::move(rows)) {}

  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

}  // namespace nnts
