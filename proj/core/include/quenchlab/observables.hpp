// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_OBSERVABLES_HPP
#define QUENCHLAB_OBSERVABLES_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "quenchlab/fock_basis.hpp"

namespace quenchlab {

using Amplitude = std::complex<double>;

/// Measured configurations, optionally with repeat counts. Shots are stored
/// flat (row-major, n_shots x sites).
struct ShotTable {
  int sites = 0;
  std::vector<Occupation> data;
  std::vector<std::uint32_t> counts;  // empty means every shot counts once

  std::size_t n_shots() const {
    return sites > 0 ? data.size() / static_cast<std::size_t>(sites) : 0;
  }
  std::span<const Occupation> shot(std::size_t i) const {
    return {data.data() + i * static_cast<std::size_t>(sites),
            static_cast<std::size_t>(sites)};
  }
  double weight(std::size_t i) const {
    return counts.empty() ? 1.0 : static_cast<double>(counts[i]);
  }
  double total_weight() const;
  void append(std::span<const Occupation> shot, std::uint32_t count = 1);
};

/// Distribution of the total boson number in the leading block of m sites.
struct BlockNumberDistribution {
  int block_size = 0;
  std::vector<double> p;  // p[n] for n = 0..min(n_total, m*cap)
};

/// <n_l> per site, exact from amplitudes or empirical from shots.
std::vector<double> site_populations(std::span<const Amplitude> psi,
                                     const SectorBasis& basis);
std::vector<double> site_populations(const ShotTable& shots);

/// C = (1/N) sum_l (2<n_l>(t) - 1)(2<n_l>(0) - 1).
double autocorrelation(std::span<const double> pop_t, std::span<const double> pop_0);

BlockNumberDistribution block_number_distribution(std::span<const Amplitude> psi,
                                                  const SectorBasis& basis,
                                                  int block_size);
/// Shot-table variant; `max_total` sizes the bin range (pass
/// min(n_total, m*cap) for the sector, or the largest observable total).
BlockNumberDistribution block_number_distribution(const ShotTable& shots,
                                                  int block_size, int max_total);

/// Shannon entropy of a block-number distribution, natural log, 0 log 0 := 0.
double number_entropy(const BlockNumberDistribution& dist);

/// Probability-weighted normalized flip count relative to a 0/1 reference
/// configuration. A site counts as flipped iff its occupation differs from
/// the reference entry, which reduces to the usual definition on 0/1
/// outcomes and stays bounded by 1.
double hamming_distance(std::span<const Amplitude> psi, const SectorBasis& basis,
                        const Configuration& reference);
double hamming_distance(const ShotTable& shots, const Configuration& reference);

}  // namespace quenchlab

#endif
