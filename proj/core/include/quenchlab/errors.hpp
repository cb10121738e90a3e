// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_ERRORS_HPP
#define QUENCHLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quenchlab {

/// Invalid argument or inconsistent inputs (bad bounds, dimension mismatch).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical kernel failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Reduction over an empty or degenerate sample set.
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quenchlab

#endif
