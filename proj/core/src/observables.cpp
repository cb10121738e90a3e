// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/observables.hpp"

#include <algorithm>
#include <cmath>

#include "quenchlab/errors.hpp"

namespace quenchlab {

double ShotTable::total_weight() const {
  if (counts.empty()) return static_cast<double>(n_shots());
  double acc = 0.0;
  for (auto c : counts) acc += c;
  return acc;
}

void ShotTable::append(std::span<const Occupation> shot, std::uint32_t count) {
  if (static_cast<int>(shot.size()) != sites)
    throw ParameterError("ShotTable: wrong shot length");
  if (!counts.empty() || count != 1) {
    if (counts.empty()) counts.assign(n_shots(), 1);
    counts.push_back(count);
  }
  data.insert(data.end(), shot.begin(), shot.end());
}

std::vector<double> site_populations(std::span<const Amplitude> psi,
                                     const SectorBasis& basis) {
  if (psi.size() != basis.size())
    throw ParameterError("site_populations: state/basis size mismatch");
  std::vector<double> pop(static_cast<std::size_t>(basis.sites()), 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double w = std::norm(psi[i]);
    if (w == 0.0) continue;
    auto c = basis.state(i);
    for (int l = 0; l < basis.sites(); ++l) pop[static_cast<std::size_t>(l)] += w * c[l];
  }
  return pop;
}

std::vector<double> site_populations(const ShotTable& shots) {
  if (shots.n_shots() == 0) throw EstimationError("site_populations: empty shot table");
  std::vector<double> pop(static_cast<std::size_t>(shots.sites), 0.0);
  for (std::size_t i = 0; i < shots.n_shots(); ++i) {
    const double w = shots.weight(i);
    auto s = shots.shot(i);
    for (int l = 0; l < shots.sites; ++l) pop[static_cast<std::size_t>(l)] += w * s[l];
  }
  const double total = shots.total_weight();
  for (auto& v : pop) v /= total;
  return pop;
}

double autocorrelation(std::span<const double> pop_t, std::span<const double> pop_0) {
  if (pop_t.size() != pop_0.size() || pop_t.empty())
    throw ParameterError("autocorrelation: population length mismatch");
  double acc = 0.0;
  for (std::size_t l = 0; l < pop_t.size(); ++l)
    acc += (2.0 * pop_t[l] - 1.0) * (2.0 * pop_0[l] - 1.0);
  return acc / static_cast<double>(pop_t.size());
}

BlockNumberDistribution block_number_distribution(std::span<const Amplitude> psi,
                                                  const SectorBasis& basis,
                                                  int block_size) {
  if (block_size < 1 || block_size > basis.sites())
    throw ParameterError("block_number_distribution: block size out of range");
  if (psi.size() != basis.size())
    throw ParameterError("block_number_distribution: state/basis size mismatch");
  const int nmax = std::min(basis.total(), block_size * basis.cap());
  BlockNumberDistribution dist;
  dist.block_size = block_size;
  dist.p.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double w = std::norm(psi[i]);
    if (w == 0.0) continue;
    auto c = basis.state(i);
    int n = 0;
    for (int l = 0; l < block_size; ++l) n += c[l];
    dist.p[static_cast<std::size_t>(n)] += w;
  }
  return dist;
}

BlockNumberDistribution block_number_distribution(const ShotTable& shots,
                                                  int block_size, int max_total) {
  if (block_size < 1 || block_size > shots.sites)
    throw ParameterError("block_number_distribution: block size out of range");
  if (shots.n_shots() == 0)
    throw EstimationError("block_number_distribution: empty shot table");
  BlockNumberDistribution dist;
  dist.block_size = block_size;
  dist.p.assign(static_cast<std::size_t>(max_total) + 1, 0.0);
  for (std::size_t i = 0; i < shots.n_shots(); ++i) {
    auto s = shots.shot(i);
    int n = 0;
    for (int l = 0; l < block_size; ++l) n += s[l];
    if (n > max_total)
      throw ParameterError("block_number_distribution: shot exceeds max_total");
    dist.p[static_cast<std::size_t>(n)] += shots.weight(i);
  }
  const double total = shots.total_weight();
  for (auto& v : dist.p) v /= total;
  return dist;
}

double number_entropy(const BlockNumberDistribution& dist) {
  double s = 0.0;
  for (double p : dist.p) {
    if (p < 0.0) throw ParameterError("number_entropy: negative probability");
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

namespace {

double flip_fraction(std::span<const Occupation> outcome, const Configuration& ref) {
  int flips = 0;
  for (std::size_t l = 0; l < ref.size(); ++l)
    if (outcome[l] != ref[l]) ++flips;
  return static_cast<double>(flips) / static_cast<double>(ref.size());
}

}  // namespace

double hamming_distance(std::span<const Amplitude> psi, const SectorBasis& basis,
                        const Configuration& reference) {
  if (static_cast<int>(reference.size()) != basis.sites())
    throw ParameterError("hamming_distance: reference length mismatch");
  for (auto v : reference)
    if (v > 1) throw ParameterError("hamming_distance: reference must be 0/1");
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double w = std::norm(psi[i]);
    if (w == 0.0) continue;
    acc += w * flip_fraction(basis.state(i), reference);
  }
  return acc;
}

double hamming_distance(const ShotTable& shots, const Configuration& reference) {
  if (static_cast<int>(reference.size()) != shots.sites)
    throw ParameterError("hamming_distance: reference length mismatch");
  for (auto v : reference)
    if (v > 1) throw ParameterError("hamming_distance: reference must be 0/1");
  if (shots.n_shots() == 0) throw EstimationError("hamming_distance: empty shot table");
  double acc = 0.0;
  for (std::size_t i = 0; i < shots.n_shots(); ++i)
    acc += shots.weight(i) * flip_fraction(shots.shot(i), reference);
  return acc / shots.total_weight();
}

}  // namespace quenchlab
