// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_DENSITY_HPP
#define QUENCHLAB_DENSITY_HPP

#include <span>
#include <vector>

namespace quenchlab {

/// Gaussian-kernel density estimation helpers shared by the distribution
/// fits and the posterior mode extraction.

/// Silverman's rule with a floor of `floor_frac` times the sample range (the
/// floor keeps degenerate rugs from collapsing the kernel).
double silverman_bandwidth(std::span<const double> samples, double floor_frac = 0.01);

/// Density evaluated on the given grid; integrates to ~1 when the grid covers
/// the samples with a few bandwidths to spare.
std::vector<double> kde_density(std::span<const double> samples, double bandwidth,
                                std::span<const double> grid);

/// Uniform grid spanning the samples padded by `pad_bandwidths` kernel widths.
std::vector<double> kde_grid(std::span<const double> samples, double bandwidth,
                             int points = 1024, double pad_bandwidths = 6.0);

/// Location of the KDE maximum with Silverman bandwidth.
double kde_mode(std::span<const double> samples);

double sample_quantile(std::vector<double> sorted_or_not, double q);

}  // namespace quenchlab

#endif
