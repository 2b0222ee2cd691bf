#pragma once

#include <stdexcept>

namespace admmkit {

/// Thrown by sub-problem oracles and factorizations; a solve run catches it
/// and reports SolveStatus::SolverError instead of propagating.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-facing configuration (maps to CLI exit code 2).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Filesystem or file-format failure (maps to CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace admmkit
