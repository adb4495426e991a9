#pragma once

#include <stdexcept>
#include <string>

namespace bsfw {

// Mismatched vector/matrix shapes or out-of-range indices.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rejected configuration value or unknown key.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input data; message carries the line number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};

// A solver-maintained invariant failed at run time.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative routine ran out of iterations; carries the last residual.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double res)
      : std::runtime_error(what + " (residual " + std::to_string(res) + ")"), residual(res) {}
  double residual;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bsfw
