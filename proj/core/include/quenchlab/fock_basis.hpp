// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_FOCK_BASIS_HPP
#define QUENCHLAB_FOCK_BASIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace quenchlab {

/// Per-site boson count of one basis state or measurement outcome.
using Occupation = std::uint8_t;
using Configuration = std::vector<Occupation>;

/// Number-conserving bosonic sector with per-site truncation: every
/// configuration has the same total occupation and every entry lies in
/// [0, cap]. States are enumerated in ascending lexicographic order with
/// site 1 most significant, which makes ordinals reproducible across runs
/// and platforms. Immutable after construction; safe for concurrent reads.
class SectorBasis {
 public:
  SectorBasis(int sites, int total, int cap);

  int sites() const { return sites_; }
  int total() const { return total_; }
  int cap() const { return cap_; }
  std::size_t size() const { return size_; }

  std::span<const Occupation> state(std::size_t i) const {
    return {states_.data() + i * static_cast<std::size_t>(sites_),
            static_cast<std::size_t>(sites_)};
  }

  /// Ordinal of a configuration, or nullopt when it is not in this sector
  /// (wrong length, over-cap entry, or wrong total). O(sites) combinatorial
  /// ranking, no search.
  std::optional<std::size_t> state_index(std::span<const Occupation> c) const;

  /// Number of configurations of `total` bosons on `sites` sites with at most
  /// `cap` per site (the generating-function coefficient).
  static std::uint64_t dimension(int sites, int total, int cap);

 private:
  int sites_, total_, cap_;
  std::size_t size_;
  std::vector<Occupation> states_;  // row-major, size * sites
  std::vector<std::uint64_t> count_;  // count_[s][t]: fillings of s sites with t bosons
  std::uint64_t suffix_count(int sites_left, int total_left) const;
};

SectorBasis enumerate_basis(int sites, int total, int cap);

}  // namespace quenchlab

#endif
