// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_NELDER_MEAD_HPP
#define QUENCHLAB_NELDER_MEAD_HPP

#include <functional>
#include <vector>

namespace quenchlab {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_spread = 0.1;  // per-coordinate offset of the start simplex
  double diameter_tol = 1e-8;   // stop when the simplex collapses below this
  int max_iterations = 5000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& options);

}  // namespace quenchlab

#endif
