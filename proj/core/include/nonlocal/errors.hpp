#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nonlocal {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. Carries the byte offset of the offending token.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Unbound variable or domain violation (ln of non-positive, sqrt of negative).
class EvalError : public Error {
public:
  using Error::Error;
};

/// Invalid argument or broken type invariant (bad atom layout, dimension mismatch, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
public:
  using Error::Error;
};

/// The integrator state left the representable range (overflow / non-finite).
class EscapeError : public Error {
public:
  EscapeError(const std::string& message, double time)
      : Error(message + " (first offending time t=" + std::to_string(time) + ")"),
        time_(time) {}

  double time() const noexcept { return time_; }

private:
  double time_;
};

/// Brouwer degree undefined (boundary vanishing) or inconclusive (winding residual).
class DegreeError : public Error {
public:
  using Error::Error;
};

/// Solver failure: no root found, escaped seeds, or a regularization path that
/// did not converge. Carries the diagnostics the caller is expected to report.
class SolveError : public Error {
public:
  SolveError(const std::string& message,
             double best_residual = 0.0,
             std::vector<double> best_seed = {},
             std::vector<double> cauchy_gaps = {})
      : Error(message),
        best_residual_(best_residual),
        best_seed_(std::move(best_seed)),
        cauchy_gaps_(std::move(cauchy_gaps)) {}

  double best_residual() const noexcept { return best_residual_; }
  const std::vector<double>& best_seed() const noexcept { return best_seed_; }
  const std::vector<double>& cauchy_gaps() const noexcept { return cauchy_gaps_; }

private:
  double best_residual_;
  std::vector<double> best_seed_;
  std::vector<double> cauchy_gaps_;
};

/// Malformed problem configuration. Carries the JSON path of the bad field.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& message) : Error(message) {}
  ConfigError(const std::string& path, const std::string& message)
      : Error(path + ": " + message) {}
};

}  // namespace nonlocal
