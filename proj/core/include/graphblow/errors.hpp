#pragma once

#include <stdexcept>
#include <string>

namespace graphblow {

/// Malformed or inconsistent input data: bad weights, disconnected graphs,
/// duplicate ids, functions evaluated off their domain, invalid parameters.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to meet its contract (non-convergence,
/// step underflow, positivity loss). Carries the failure diagnostics in what().
struct SolveError : std::runtime_error {
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation would read past the usable radius of a finite truncation
/// of an infinite graph.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace graphblow
