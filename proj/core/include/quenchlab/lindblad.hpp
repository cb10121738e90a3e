// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_LINDBLAD_HPP
#define QUENCHLAB_LINDBLAD_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "quenchlab/hamiltonian.hpp"
#include "quenchlab/krylov.hpp"
#include "quenchlab/observables.hpp"
#include "quenchlab/propagator.hpp"
#include "quenchlab/units.hpp"

namespace quenchlab {

/// Decay and dephasing rates per site, units of J1. The master equation uses
/// (Gamma_l/2) D[a_l] + (gamma_l/2) D[n_l] with
/// D[O] rho = 2 O rho O+ - rho O+O - O+O rho, so the jump-operator rates are
/// Gamma_l and gamma_l themselves (single-qubit decay gives P1(t) = e^{-Gamma t}).
struct NoiseSpec {
  std::vector<double> decay_rates;
  std::vector<double> dephasing_rates;

  static NoiseSpec uniform(int sites, double decay, double dephasing);
  /// Gamma = 1/T1, gamma = 1/T2*, converted from microseconds to J1 units.
  static NoiseSpec from_device_times(std::span<const double> t1_us,
                                     std::span<const double> t2_us,
                                     const DeviceUnits& units = {});
  NoiseSpec scaled(double factor) const;
  void validate(int sites) const;
  bool all_zero() const;
};

/// Direct sum of number sectors top_total, top_total-1, ..., 0. Decay only
/// lowers the total, so this is the full reachable space for an initial state
/// in the top sector.
class DirectSumBasis {
 public:
  DirectSumBasis(int sites, int top_total, int cap);
  int sites() const { return sites_; }
  int cap() const { return cap_; }
  int top_total() const { return top_total_; }
  const SectorBasis& sector(int total) const { return sectors_[static_cast<std::size_t>(total)]; }
  std::size_t offset(int total) const { return offsets_[static_cast<std::size_t>(total)]; }
  std::size_t dim() const { return dim_; }

 private:
  int sites_, top_total_, cap_;
  std::vector<SectorBasis> sectors_;  // indexed by total occupation
  std::vector<std::size_t> offsets_;
  std::size_t dim_;
};

enum class LindbladMethod { kTrajectories, kDense };

struct LindbladOptions {
  int n_trajectories = 2000;
  std::uint64_t seed = 0;
  /// The dense solver refuses direct-sum dimensions above this; use
  /// trajectories for larger systems.
  std::size_t dense_dim_cap = 512;
  double dense_abs_tol = 1e-12;
  double dense_rel_tol = 1e-10;
  /// Jump times are bisected to this resolution relative to max(1, t_final).
  double jump_time_resolution = 1e-6;
  KrylovOptions krylov{};
  /// Sample one configuration per trajectory at every record time.
  bool sample_endpoint_shots = false;
  /// Record the diagonal of rho (configuration probabilities over the full
  /// direct sum) at every time; needed for number entropy and Hamming
  /// distance of open-system runs.
  bool record_diagonal = false;
};

struct LindbladTrajectory {
  LindbladMethod method = LindbladMethod::kTrajectories;
  std::vector<double> times;
  std::vector<std::vector<double>> populations;  // [time][site]
  std::vector<std::vector<double>> std_errors;   // trajectories method only
  std::vector<double> trace;                     // dense method only
  std::vector<ShotTable> shots;                  // per time when sampled
  std::vector<std::vector<double>> diagonal;     // [time][flat index] when recorded
  int n_trajectories = 0;
  long total_jumps = 0;
};

/// Marginal of the leading-block boson total over a direct-sum diagonal.
BlockNumberDistribution block_number_distribution(const DirectSumBasis& basis,
                                                  std::span<const double> diagonal,
                                                  int block_size);
/// Probability-weighted flip fraction over a direct-sum diagonal.
double hamming_distance(const DirectSumBasis& basis, std::span<const double> diagonal,
                        const Configuration& reference);

/// Evolves |initial><initial| (a Fock state in the top sector) under the
/// master equation and records site populations at the given times.
LindbladTrajectory evolve_lindblad(const ModelSpec& spec,
                                   const DisorderRealization& disorder,
                                   const NoiseSpec& noise,
                                   const Configuration& initial,
                                   std::vector<double> times, LindbladMethod method,
                                   const LindbladOptions& options = {},
                                   unsigned n_threads = 1);

}  // namespace quenchlab

#endif
