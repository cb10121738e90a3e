// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quenchlab/errors.hpp"

namespace quenchlab {

double sample_quantile(std::vector<double> v, double q) {
  if (v.empty()) throw EstimationError("sample_quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("sample_quantile: q outside [0,1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double silverman_bandwidth(std::span<const double> samples, double floor_frac) {
  if (samples.empty()) throw EstimationError("silverman_bandwidth: empty sample");
  const std::size_t n = samples.size();
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  std::vector<double> copy(samples.begin(), samples.end());
  const double iqr = sample_quantile(copy, 0.75) - sample_quantile(copy, 0.25);
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double range = *hi - *lo;

  double scale = std::sqrt(var);
  if (iqr > 0.0) scale = std::min(scale, iqr / 1.34);
  double bw = 0.9 * scale * std::pow(static_cast<double>(n), -0.2);
  bw = std::max(bw, floor_frac * range);
  if (!(bw > 0.0)) bw = std::max(1e-9, 1e-6 * std::abs(*hi));  // degenerate rug
  if (!(bw > 0.0)) bw = 1e-9;
  return bw;
}

std::vector<double> kde_grid(std::span<const double> samples, double bandwidth,
                             int points, double pad_bandwidths) {
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double a = *lo - pad_bandwidths * bandwidth;
  const double b = *hi + pad_bandwidths * bandwidth;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = a + (b - a) * i / (points - 1);
  return grid;
}

std::vector<double> kde_density(std::span<const double> samples, double bandwidth,
                                std::span<const double> grid) {
  if (!(bandwidth > 0.0)) throw ParameterError("kde_density: bandwidth must be > 0");
  const double norm = 1.0 / (static_cast<double>(samples.size()) * bandwidth *
                             std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (double x : samples) {
      const double z = (grid[g] - x) / bandwidth;
      if (std::abs(z) < 8.0) acc += std::exp(-0.5 * z * z);
    }
    out[g] = norm * acc;
  }
  return out;
}

double kde_mode(std::span<const double> samples) {
  if (samples.empty()) throw EstimationError("kde_mode: empty sample");
  const double bw = silverman_bandwidth(samples);
  const auto grid = kde_grid(samples, bw, 2048, 1.0);
  const auto density = kde_density(samples, bw, grid);
  const auto it = std::max_element(density.begin(), density.end());
  return grid[static_cast<std::size_t>(it - density.begin())];
}

}  // namespace quenchlab
