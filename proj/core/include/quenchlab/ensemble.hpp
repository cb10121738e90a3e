// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_ENSEMBLE_HPP
#define QUENCHLAB_ENSEMBLE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace quenchlab {

/// The three diagnostics of the protocol. S is always the half-chain number
/// entropy in table contexts.
enum class Quantity : int { kAutoCorrelation = 0, kNumberEntropy = 1, kHammingDistance = 2 };

inline constexpr std::array<Quantity, 3> kAllQuantities{
    Quantity::kAutoCorrelation, Quantity::kNumberEntropy, Quantity::kHammingDistance};

char quantity_letter(Quantity q);
Quantity quantity_from_letter(char c);

struct EnsembleCell {
  double q_eq = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> per_time;  // value at each equilibrium time
  double retention = 1.0;        // post-selection survival fraction (shots mode)
  std::uint64_t seed = 0;        // disorder seed of the realization
  bool valid = false;
};

/// Equilibrium values keyed by (quantity, initial state, realization, h).
/// Missing cells stay invalid; reductions skip them and report effective R.
class EnsembleTable {
 public:
  EnsembleTable() = default;
  EnsembleTable(int n_states, int n_realizations, std::vector<double> h_grid);

  int n_states() const { return n_states_; }
  int n_realizations() const { return n_realizations_; }
  const std::vector<double>& h_grid() const { return h_grid_; }

  EnsembleCell& cell(Quantity q, int state, int realization, int h_index);
  const EnsembleCell& cell(Quantity q, int state, int realization, int h_index) const;

  // Provenance and context carried into every output file.
  int sites = 0;
  int cap = 0;
  int n_total = 0;
  std::vector<double> eq_times;
  std::uint64_t master_seed = 0;
  std::string config_hash;
  std::string mode;  // "exact" or "shots", with "+noise" when open-system

  void write_csv(const std::filesystem::path& path) const;
  static EnsembleTable read_csv(const std::filesystem::path& path);

 private:
  int n_states_ = 0, n_realizations_ = 0;
  std::vector<double> h_grid_;
  std::vector<EnsembleCell> cells_;
  std::size_t index(Quantity q, int state, int realization, int h_index) const;
};

}  // namespace quenchlab

#endif
