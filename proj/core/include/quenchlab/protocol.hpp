// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_PROTOCOL_HPP
#define QUENCHLAB_PROTOCOL_HPP

#include <optional>
#include <string>
#include <vector>

#include "quenchlab/ensemble.hpp"
#include "quenchlab/lindblad.hpp"
#include "quenchlab/observables.hpp"
#include "quenchlab/propagator.hpp"
#include "quenchlab/rng.hpp"

namespace quenchlab {

/// Per-site probabilities of reading a qubit out correctly.
struct ReadoutModel {
  std::vector<double> f00;  // P(read 0 | prepared 0)
  std::vector<double> f11;  // P(read 1 | prepared 1)
  static ReadoutModel uniform(int sites, double f00, double f11);
  void validate(int sites) const;
};

enum class RunMode { kExact, kShots };

/// The full experiment sweep: which initial states, which disorder strengths,
/// how many realizations, which equilibrium-window times.
struct RunPlan {
  std::vector<Configuration> initial_states;
  std::vector<double> disorder_grid;
  int realizations = 60;
  std::vector<double> eq_times;
  int shots = 3000;
  std::optional<ReadoutModel> readout;
  std::uint64_t master_seed = 0;
  RunMode mode = RunMode::kExact;

  /// The ten half-filled 12-site product states of the experiment, the
  /// 13-point disorder grid h/J1 = 1..7, R = 60, five equilibrium times
  /// evenly spaced over J1 t in [7.9, 10.8], 3000 shots.
  static RunPlan paper_defaults(std::uint64_t master_seed = 0);

  /// Evenly spaced equilibrium window (the default spans [7.9, 10.8]).
  static std::vector<double> equilibrium_window(int points = 5, double t_min = 7.9,
                                                double t_max = 10.8);

  int filling_total(int sites) const;  // common total occupation of the states
  void validate(int sites) const;
};

/// Everything recorded for one (initial state, realization, h) run.
struct QuenchRecord {
  int state_index = 0;
  int realization = 0;
  int h_index = 0;
  double h = 0.0;
  std::uint64_t disorder_seed = 0;

  std::vector<double> times;  // eq_times plus any extra record times, sorted
  std::vector<bool> is_eq_time;
  std::vector<std::vector<double>> populations;  // [time][site]
  // Block number distributions for m = 1..sites/2, per time.
  std::vector<std::vector<BlockNumberDistribution>> block_dists;
  std::vector<double> autocorrelation_t, number_entropy_t, hamming_t;  // per time
  std::vector<double> leakage_t;  // max truncation leakage per time (closed system)
  double retention = 1.0;         // shots mode: post-selection survival
  std::vector<ShotTable> raw_shots, kept_shots;  // shots mode, per time

  double q_eq(Quantity q) const;
  std::array<double, 3> eq_values{};  // indexed by Quantity
  std::vector<double> per_time(Quantity q) const;
};

/// I.i.d. configuration draws from |psi_c|^2. Without a readout model the raw
/// occupations are returned; with one, occupations are first thresholded to
/// 0/1 (dispersive readout distinguishes only |0> from |1>) and then each bit
/// flips with probability 1-f00 or 1-f11 independently.
ShotTable sample_shots(const StateVector& psi, const SectorBasis& basis, int n_shots,
                       const std::optional<ReadoutModel>& readout, RngStream& rng);

/// Keeps exactly the shots whose total occupation equals n_total.
ShotTable post_select(const ShotTable& shots, int n_total, double* retention = nullptr);

struct SolverSettings {
  KrylovOptions krylov{};
  LindbladOptions lindblad{};
};

/// Runs one quench end to end. `extra_times` are recorded alongside the plan's
/// equilibrium times but excluded from the Q_eq averages.
QuenchRecord run_quench(const ModelSpec& spec, const std::optional<NoiseSpec>& noise,
                        const RunPlan& plan, int state_index, int realization,
                        int h_index, std::vector<double> extra_times = {},
                        const SolverSettings& solver = {}, unsigned threads = 1);

struct SweepSettings {
  SolverSettings solver{};
  unsigned jobs = 1;
};

struct SweepResult {
  EnsembleTable table;
  std::vector<std::string> failures;  // one message per failed cell
};

/// The full (state, realization, h) sweep. Cells are independent work items;
/// the table is keyed, so results are bit-identical for a fixed master seed
/// regardless of worker count or execution order. Closed-system sweeps
/// propagate all initial states of one (realization, h) pair as a single
/// Lanczos block, sharing every sparse pass.
SweepResult run_sweep(const ModelSpec& spec, const std::optional<NoiseSpec>& noise,
                      const RunPlan& plan, const SweepSettings& settings = {});

}  // namespace quenchlab

#endif
