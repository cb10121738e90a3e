// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_CALIBRATION_HPP
#define QUENCHLAB_CALIBRATION_HPP

#include <span>
#include <vector>

#include "quenchlab/hamiltonian.hpp"
#include "quenchlab/nelder_mead.hpp"
#include "quenchlab/units.hpp"

namespace quenchlab {

/// Frequency-alignment probe: tilt the chain by +step (and -step) per site,
/// excite one site, watch the population walk. Residual per-site offsets skew
/// the positive and negative cases differently, which is what the fit uses.
struct StaircasePlan {
  double step = 5.0 / 11.5;  // +5 MHz per neighboring site, in J1 units
  int time_points = 40;
  double t_max = 10.0;  // J1 t
};

/// Population traces indexed by (case, excited site, time, site); case 0 is
/// the positive staircase, case 1 the negative one.
struct StaircaseTraces {
  int sites = 0;
  std::vector<double> times;
  std::vector<double> data;

  double at(int c, int excited, int t, int site) const {
    return data[index(c, excited, t, site)];
  }
  double& at(int c, int excited, int t, int site) { return data[index(c, excited, t, site)]; }
  std::size_t index(int c, int excited, int t, int site) const {
    return ((static_cast<std::size_t>(c) * sites + excited) * times.size() + t) * sites +
           static_cast<std::size_t>(site);
  }
};

/// Single-excitation dynamics for both staircase cases and every excited
/// site. The one-boson sector makes this an N x N problem.
StaircaseTraces simulate_staircase(const ModelSpec& spec,
                                   std::span<const double> offsets,
                                   const StaircasePlan& plan);

/// Sum of squared trace differences; zero (up to the simulator tolerance) at
/// the true offsets, and invariant under a uniform shift of all offsets.
double staircase_cost(const StaircaseTraces& observed, const ModelSpec& spec,
                      const StaircasePlan& plan, std::span<const double> offsets);

struct OffsetEstimate {
  std::vector<double> offsets;  // gauge-fixed: mean subtracted
  double cost = 0.0;            // pure trace cost at the estimate
  int iterations = 0;
  bool converged = false;
};

NelderMeadOptions default_fit_options();

/// Nelder-Mead fit of the per-site offsets from observed traces. The uniform
/// shift of all offsets is unobservable in single-excitation traces, so the
/// objective pins the mean to zero and the estimate is reported gauge-fixed.
OffsetEstimate fit_offsets(const StaircaseTraces& observed, const ModelSpec& spec,
                           const StaircasePlan& plan,
                           const NelderMeadOptions& options = default_fit_options());

}  // namespace quenchlab

#endif
