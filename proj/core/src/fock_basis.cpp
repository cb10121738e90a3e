// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/fock_basis.hpp"

#include <algorithm>

#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {

// count[s][t] = number of ways to place t bosons on s sites with <= cap each.
std::vector<std::uint64_t> build_count_table(int sites, int total, int cap) {
  const int w = total + 1;
  std::vector<std::uint64_t> count(static_cast<std::size_t>(sites + 1) * w, 0);
  count[0] = 1;  // zero sites, zero bosons
  for (int s = 1; s <= sites; ++s) {
    for (int t = 0; t <= total; ++t) {
      std::uint64_t acc = 0;
      for (int v = 0; v <= std::min(cap, t); ++v)
        acc += count[static_cast<std::size_t>(s - 1) * w + (t - v)];
      count[static_cast<std::size_t>(s) * w + t] = acc;
    }
  }
  return count;
}

}  // namespace

SectorBasis::SectorBasis(int sites, int total, int cap)
    : sites_(sites), total_(total), cap_(cap) {
  if (sites < 1) throw ParameterError("SectorBasis: sites must be >= 1");
  if (cap < 0) throw ParameterError("SectorBasis: cap must be >= 0");
  if (total < 0 || total > sites * cap)
    throw ParameterError("SectorBasis: total must be in [0, sites*cap]");

  count_ = build_count_table(sites, total, cap);
  size_ = static_cast<std::size_t>(suffix_count(sites, total));
  states_.resize(size_ * static_cast<std::size_t>(sites));

  // Ascending lexicographic enumeration, site 1 most significant. The
  // smallest configuration packs all bosons to the right; the successor of c
  // increments the rightmost site l (l <= sites-2) that is below cap and has
  // at least one boson somewhere to its right, then re-packs the remaining
  // suffix bosons minimally.
  auto pack_right = [&](Configuration& c, int from, int amount) {
    for (int j = sites - 1; j >= from; --j) {
      const int v = std::min(cap, amount);
      c[static_cast<std::size_t>(j)] = static_cast<Occupation>(v);
      amount -= v;
    }
  };
  Configuration c(static_cast<std::size_t>(sites), 0);
  pack_right(c, 0, total);
  std::size_t row = 0;
  for (;;) {
    std::copy(c.begin(), c.end(), states_.begin() + row * static_cast<std::size_t>(sites));
    ++row;
    int tail = c[static_cast<std::size_t>(sites - 1)];  // bosons strictly right of l
    int l = sites - 2;
    while (l >= 0 && !(c[static_cast<std::size_t>(l)] < cap && tail >= 1)) {
      tail += c[static_cast<std::size_t>(l)];
      --l;
    }
    if (l < 0) break;
    c[static_cast<std::size_t>(l)] += 1;
    pack_right(c, l + 1, tail - 1);
  }
  if (row != size_) throw SolverError("SectorBasis: enumeration/count mismatch");
}

std::uint64_t SectorBasis::suffix_count(int sites_left, int total_left) const {
  if (total_left < 0 || total_left > total_) return 0;
  return count_[static_cast<std::size_t>(sites_left) * (total_ + 1) + total_left];
}

std::optional<std::size_t> SectorBasis::state_index(std::span<const Occupation> c) const {
  if (static_cast<int>(c.size()) != sites_) return std::nullopt;
  int rem = total_;
  std::uint64_t rank = 0;
  for (int l = 0; l < sites_; ++l) {
    const int v = c[static_cast<std::size_t>(l)];
    if (v > cap_ || v > rem) return std::nullopt;
    // Configurations smaller at the first differing site l carry value < v.
    for (int w = 0; w < v; ++w) rank += suffix_count(sites_ - 1 - l, rem - w);
    rem -= v;
  }
  if (rem != 0) return std::nullopt;
  return static_cast<std::size_t>(rank);
}

std::uint64_t SectorBasis::dimension(int sites, int total, int cap) {
  if (sites < 1 || cap < 0 || total < 0) throw ParameterError("dimension: invalid bounds");
  if (total > sites * cap) return 0;
  return build_count_table(sites, total, cap)[static_cast<std::size_t>(sites) * (total + 1) + total];
}

SectorBasis enumerate_basis(int sites, int total, int cap) {
  return SectorBasis(sites, total, cap);
}

}  // namespace quenchlab
