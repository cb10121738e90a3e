// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_STATISTICS_HPP
#define QUENCHLAB_STATISTICS_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "quenchlab/ensemble.hpp"

namespace quenchlab {

/// Per-h ensemble mean <Q_eq> and sample-to-sample standard deviation
/// Delta Q_eq = sqrt(sum_r (Q - <Q>)^2 / R), i.e. the population standard
/// deviation over realizations. Points with too few surviving realizations
/// (fewer than 2, or fewer than min(10, R) when cells went missing) are
/// flagged unusable.
struct DisorderCurve {
  std::vector<double> h;
  std::vector<double> mean;
  std::vector<double> std_dev;
  std::vector<int> effective_r;
  std::vector<bool> usable;
};

DisorderCurve disorder_curve(const EnsembleTable& table, Quantity q, int state);

/// Pointwise arithmetic mean of both the mean and the std curves: the
/// initial-state average is an average of per-state standard deviations, not
/// the std of pooled samples.
DisorderCurve average_over_states(std::span<const DisorderCurve> curves);

/// Sample rug, histogram and smooth (Gaussian-kernel) density of equilibrium
/// values at one disorder strength. The state-averaged variant averages the
/// per-state densities on a common grid.
struct FittedDistribution {
  std::vector<double> samples;     // pooled rug
  std::vector<double> bin_edges;   // histogram of the pooled samples
  std::vector<double> bin_counts;
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;  // largest per-state bandwidth used
};

FittedDistribution fit_distribution(std::span<const double> samples);
FittedDistribution fit_distribution(const EnsembleTable& table, Quantity q, int h_index);

/// Width measure of a fitted density via its CDF on the grid.
double interquartile_range(const FittedDistribution& dist);

/// Argmax of the std-dev curve over usable grid points, ties broken toward
/// smaller h. Returns nullopt for a flat (degenerate) curve.
std::optional<double> find_peak(const DisorderCurve& curve);

/// The 3 x I matrix of per-quantity, per-state transition points (peak
/// locations), with per-quantity mean and population std over states.
struct PeakTable {
  int n_states = 0;
  std::vector<double> values;  // 3 * n_states, NaN marks a missing entry
  double at(Quantity q, int state) const;
  double& at(Quantity q, int state);
  double mean(Quantity q) const;
  double std_dev(Quantity q) const;  // population std over non-missing states
  void write_csv(const std::filesystem::path& path) const;
  static PeakTable read_csv(const std::filesystem::path& path);
};

PeakTable peak_table(const EnsembleTable& table);

}  // namespace quenchlab

#endif
