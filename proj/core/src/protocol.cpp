// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "quenchlab/errors.hpp"
#include "quenchlab/thread_pool.hpp"

namespace quenchlab {

ReadoutModel ReadoutModel::uniform(int sites, double f00, double f11) {
  ReadoutModel r;
  r.f00.assign(static_cast<std::size_t>(sites), f00);
  r.f11.assign(static_cast<std::size_t>(sites), f11);
  r.validate(sites);
  return r;
}

void ReadoutModel::validate(int sites) const {
  if (static_cast<int>(f00.size()) != sites || static_cast<int>(f11.size()) != sites)
    throw ParameterError("ReadoutModel: need one (f00, f11) pair per site");
  for (double f : f00)
    if (!(f >= 0.0 && f <= 1.0)) throw ParameterError("ReadoutModel: f00 outside [0,1]");
  for (double f : f11)
    if (!(f >= 0.0 && f <= 1.0)) throw ParameterError("ReadoutModel: f11 outside [0,1]");
}

std::vector<double> RunPlan::equilibrium_window(int points, double t_min, double t_max) {
  if (points < 1 || t_max < t_min)
    throw ParameterError("equilibrium_window: invalid window");
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    t[static_cast<std::size_t>(i)] =
        points == 1 ? t_min : t_min + (t_max - t_min) * i / (points - 1);
  return t;
}

RunPlan RunPlan::paper_defaults(std::uint64_t master_seed) {
  RunPlan plan;
  plan.initial_states = {
      {0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0}, {0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0},
      {0, 1, 0, 1, 1, 1, 0, 1, 1, 0, 0, 0}, {0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0},
      {0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0, 0}, {1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 1},
      {1, 0, 0, 0, 1, 1, 1, 0, 0, 1, 1, 0}, {1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0, 1},
      {1, 0, 0, 1, 1, 0, 1, 1, 0, 0, 1, 0}, {1, 0, 1, 0, 0, 0, 1, 1, 1, 0, 0, 1}};
  plan.disorder_grid.clear();
  for (int i = 0; i <= 12; ++i) plan.disorder_grid.push_back(1.0 + 0.5 * i);
  plan.realizations = 60;
  plan.eq_times = equilibrium_window();
  plan.shots = 3000;
  plan.master_seed = master_seed;
  plan.mode = RunMode::kExact;
  return plan;
}

int RunPlan::filling_total(int sites) const {
  (void)sites;
  int total = 0;
  for (auto v : initial_states.at(0)) total += v;
  return total;
}

void RunPlan::validate(int sites) const {
  if (initial_states.empty()) throw ParameterError("RunPlan: no initial states");
  for (const auto& s : initial_states) {
    if (static_cast<int>(s.size()) != sites)
      throw ParameterError("RunPlan: initial state length != sites");
    int total = 0;
    for (auto v : s) {
      if (v > 1) throw ParameterError("RunPlan: initial states must be 0/1 products");
      total += v;
    }
    if (2 * total != sites)
      throw ParameterError("RunPlan: initial states must sit at half filling");
  }
  if (disorder_grid.empty()) throw ParameterError("RunPlan: empty disorder grid");
  for (double h : disorder_grid)
    if (!(h >= 0.0)) throw ParameterError("RunPlan: disorder strengths must be >= 0");
  if (realizations < 1) throw ParameterError("RunPlan: realizations must be >= 1");
  if (eq_times.empty()) throw ParameterError("RunPlan: empty equilibrium window");
  for (std::size_t i = 0; i < eq_times.size(); ++i) {
    if (eq_times[i] < 7.9)
      throw ParameterError("RunPlan: equilibrium times must lie in the equilibrated "
                           "window (J1 t >= 7.9)");
    if (i > 0 && eq_times[i] <= eq_times[i - 1])
      throw ParameterError("RunPlan: equilibrium times must be strictly increasing");
  }
  if (mode == RunMode::kShots && shots < 1)
    throw ParameterError("RunPlan: shots must be >= 1 in shot mode");
  if (readout) readout->validate(sites);
}

namespace {

void apply_readout(Configuration& shot, const ReadoutModel& readout, RngStream& rng) {
  for (std::size_t l = 0; l < shot.size(); ++l) {
    const int bit = shot[l] >= 1 ? 1 : 0;  // dispersive readout sees |0> vs |1>
    if (bit == 0)
      shot[l] = rng.uniform() < 1.0 - readout.f00[l] ? 1 : 0;
    else
      shot[l] = rng.uniform() < 1.0 - readout.f11[l] ? 0 : 1;
  }
}

}  // namespace

ShotTable sample_shots(const StateVector& psi, const SectorBasis& basis, int n_shots,
                       const std::optional<ReadoutModel>& readout, RngStream& rng) {
  if (n_shots < 1) throw ParameterError("sample_shots: n_shots must be >= 1");
  if (psi.size() != basis.size())
    throw ParameterError("sample_shots: state/basis size mismatch");
  if (std::abs(state_norm(psi) - 1.0) > 1e-10)
    throw ParameterError("sample_shots: state is not normalized");
  if (readout) readout->validate(basis.sites());

  std::vector<double> cumulative(basis.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    acc += std::norm(psi[i]);
    cumulative[i] = acc;
  }

  ShotTable table;
  table.sites = basis.sites();
  table.data.reserve(static_cast<std::size_t>(n_shots) * basis.sites());
  Configuration shot(static_cast<std::size_t>(basis.sites()));
  for (int k = 0; k < n_shots; ++k) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx =
        std::min(static_cast<std::size_t>(it - cumulative.begin()), basis.size() - 1);
    auto c = basis.state(idx);
    std::copy(c.begin(), c.end(), shot.begin());
    if (readout) apply_readout(shot, *readout, rng);
    table.append(shot);
  }
  return table;
}

ShotTable post_select(const ShotTable& shots, int n_total, double* retention) {
  ShotTable kept;
  kept.sites = shots.sites;
  double kept_weight = 0.0;
  for (std::size_t i = 0; i < shots.n_shots(); ++i) {
    auto s = shots.shot(i);
    int total = 0;
    for (auto v : s) total += v;
    if (total == n_total) {
      kept.append(s, shots.counts.empty() ? 1 : shots.counts[i]);
      kept_weight += shots.weight(i);
    }
  }
  if (retention) {
    const double total = shots.total_weight();
    *retention = total > 0.0 ? kept_weight / total : 0.0;
  }
  return kept;
}

namespace {

std::vector<double> ideal_populations(const Configuration& s) {
  std::vector<double> p(s.size());
  for (std::size_t l = 0; l < s.size(); ++l) p[l] = s[l];
  return p;
}

// Merges eq times with extra record times; returns sorted unique times and
// the eq mask.
std::pair<std::vector<double>, std::vector<bool>> merge_times(
    const std::vector<double>& eq, const std::vector<double>& extra) {
  std::vector<double> all = eq;
  all.insert(all.end(), extra.begin(), extra.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<bool> mask(all.size(), false);
  for (std::size_t i = 0; i < all.size(); ++i)
    mask[i] = std::find(eq.begin(), eq.end(), all[i]) != eq.end();
  return {all, mask};
}

struct RecordContext {
  const RunPlan& plan;
  const Configuration& initial;
  const std::vector<double>& pop0;
  int half_block;
  int n_total;
};

// Fills the per-time slots of a record from an exact sector state.
void record_exact_time_point(QuenchRecord& rec, std::size_t t_idx, const StateVector& psi,
                             const SectorBasis& basis, const RecordContext& ctx) {
  rec.populations[t_idx] = site_populations(psi, basis);
  rec.autocorrelation_t[t_idx] = autocorrelation(rec.populations[t_idx], ctx.pop0);
  rec.block_dists[t_idx].clear();
  for (int m = 1; m <= ctx.half_block; ++m)
    rec.block_dists[t_idx].push_back(block_number_distribution(psi, basis, m));
  rec.number_entropy_t[t_idx] = number_entropy(rec.block_dists[t_idx].back());
  rec.hamming_t[t_idx] = hamming_distance(psi, basis, ctx.initial);
  rec.leakage_t[t_idx] = max_truncation_leakage(psi, basis);
}

// Fills the per-time slots from a post-selected shot table. Returns false when
// post-selection left nothing (the cell must then be treated as missing).
bool record_shot_time_point(QuenchRecord& rec, std::size_t t_idx, const ShotTable& raw,
                            const RecordContext& ctx) {
  double retention = 0.0;
  ShotTable kept = post_select(raw, ctx.n_total, &retention);
  rec.raw_shots[t_idx] = raw;
  rec.kept_shots[t_idx] = kept;
  rec.retention = (rec.retention * static_cast<double>(t_idx) + retention) /
                  static_cast<double>(t_idx + 1);
  if (kept.n_shots() == 0) return false;
  rec.populations[t_idx] = site_populations(kept);
  rec.autocorrelation_t[t_idx] = autocorrelation(rec.populations[t_idx], ctx.pop0);
  rec.block_dists[t_idx].clear();
  for (int m = 1; m <= ctx.half_block; ++m)
    rec.block_dists[t_idx].push_back(block_number_distribution(kept, m, ctx.n_total));
  rec.number_entropy_t[t_idx] = number_entropy(rec.block_dists[t_idx].back());
  rec.hamming_t[t_idx] = hamming_distance(kept, ctx.initial);
  return true;
}

void finalize_eq_values(QuenchRecord& rec) {
  double c = 0, s = 0, d = 0;
  int m = 0;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    if (!rec.is_eq_time[i]) continue;
    c += rec.autocorrelation_t[i];
    s += rec.number_entropy_t[i];
    d += rec.hamming_t[i];
    ++m;
  }
  if (m == 0) throw ParameterError("QuenchRecord: no equilibrium times recorded");
  rec.eq_values = {c / m, s / m, d / m};
}

QuenchRecord make_record_shell(const RunPlan& plan, int state_index, int realization,
                               int h_index, const std::vector<double>& times,
                               const std::vector<bool>& eq_mask, int sites) {
  QuenchRecord rec;
  rec.state_index = state_index;
  rec.realization = realization;
  rec.h_index = h_index;
  rec.h = plan.disorder_grid.at(static_cast<std::size_t>(h_index));
  rec.disorder_seed = derive_seed(plan.master_seed,
                                  {stream_purpose::kDisorder,
                                   static_cast<std::uint64_t>(realization),
                                   static_cast<std::uint64_t>(h_index)});
  rec.times = times;
  rec.is_eq_time = eq_mask;
  const std::size_t nt = times.size();
  rec.populations.assign(nt, std::vector<double>(static_cast<std::size_t>(sites), 0.0));
  rec.block_dists.assign(nt, {});
  rec.autocorrelation_t.assign(nt, 0.0);
  rec.number_entropy_t.assign(nt, 0.0);
  rec.hamming_t.assign(nt, 0.0);
  rec.leakage_t.assign(nt, 0.0);
  return rec;
}

}  // namespace

double QuenchRecord::q_eq(Quantity q) const {
  return eq_values[static_cast<std::size_t>(q)];
}

std::vector<double> QuenchRecord::per_time(Quantity q) const {
  switch (q) {
    case Quantity::kAutoCorrelation: return autocorrelation_t;
    case Quantity::kNumberEntropy: return number_entropy_t;
    case Quantity::kHammingDistance: return hamming_t;
  }
  throw ParameterError("QuenchRecord: unknown quantity");
}

QuenchRecord run_quench(const ModelSpec& spec, const std::optional<NoiseSpec>& noise,
                        const RunPlan& plan, int state_index, int realization,
                        int h_index, std::vector<double> extra_times,
                        const SolverSettings& solver, unsigned threads) {
  spec.validate();
  plan.validate(spec.sites);
  if (noise) noise->validate(spec.sites);
  const Configuration& initial =
      plan.initial_states.at(static_cast<std::size_t>(state_index));
  const int n_total = plan.filling_total(spec.sites);
  const int half_block = std::max(1, spec.sites / 2);
  auto [times, eq_mask] = merge_times(plan.eq_times, extra_times);

  QuenchRecord rec =
      make_record_shell(plan, state_index, realization, h_index, times, eq_mask, spec.sites);
  const auto disorder = sample_disorder(rec.h, spec.sites, rec.disorder_seed);
  const auto pop0 = ideal_populations(initial);
  const RecordContext ctx{plan, initial, pop0, half_block, n_total};

  if (plan.mode == RunMode::kShots) {
    rec.raw_shots.assign(times.size(), ShotTable{spec.sites, {}, {}});
    rec.kept_shots.assign(times.size(), ShotTable{spec.sites, {}, {}});
    rec.retention = 0.0;
  }

  bool missing = false;
  if (!noise) {
    SectorBasis basis(spec.sites, n_total, spec.cap);
    auto h = build_hamiltonian(spec, disorder, basis);
    auto traj = evolve_unitary(h, fock_state(basis, initial), times, solver.krylov);
    for (std::size_t t = 0; t < times.size(); ++t) {
      if (plan.mode == RunMode::kExact) {
        record_exact_time_point(rec, t, traj.states[t], basis, ctx);
      } else {
        RngStream rng(derive_seed(plan.master_seed,
                                  {stream_purpose::kShots,
                                   static_cast<std::uint64_t>(state_index),
                                   static_cast<std::uint64_t>(realization),
                                   static_cast<std::uint64_t>(h_index),
                                   static_cast<std::uint64_t>(t)}));
        auto raw = sample_shots(traj.states[t], basis, plan.shots, plan.readout, rng);
        missing = !record_shot_time_point(rec, t, raw, ctx) || missing;
        rec.leakage_t[t] = max_truncation_leakage(traj.states[t], basis);
      }
    }
  } else {
    LindbladOptions lopt = solver.lindblad;
    lopt.seed = derive_seed(plan.master_seed, {stream_purpose::kTrajectory,
                                               static_cast<std::uint64_t>(state_index),
                                               static_cast<std::uint64_t>(realization),
                                               static_cast<std::uint64_t>(h_index)});
    const std::size_t direct_sum_dim = [&] {
      std::size_t d = 0;
      for (int n = 0; n <= n_total; ++n) d += SectorBasis::dimension(spec.sites, n, spec.cap);
      return d;
    }();
    const bool dense = direct_sum_dim <= lopt.dense_dim_cap;
    const LindbladMethod method =
        dense ? LindbladMethod::kDense : LindbladMethod::kTrajectories;
    if (plan.mode == RunMode::kShots || !dense) {
      lopt.sample_endpoint_shots = true;
      if (plan.mode == RunMode::kShots) lopt.n_trajectories = plan.shots;
    }
    lopt.record_diagonal = dense;

    auto open = evolve_lindblad(spec, disorder, *noise, initial, times, method, lopt, threads);
    DirectSumBasis basis(spec.sites, n_total, spec.cap);

    for (std::size_t t = 0; t < times.size(); ++t) {
      const bool use_shots = plan.mode == RunMode::kShots;
      if (use_shots || method == LindbladMethod::kTrajectories) {
        ShotTable raw = open.shots.at(t);
        if (plan.readout) {
          RngStream rng(derive_seed(plan.master_seed,
                                    {stream_purpose::kShots,
                                     static_cast<std::uint64_t>(state_index),
                                     static_cast<std::uint64_t>(realization),
                                     static_cast<std::uint64_t>(h_index),
                                     static_cast<std::uint64_t>(t)}));
          ShotTable corrupted;
          corrupted.sites = raw.sites;
          Configuration shot(static_cast<std::size_t>(raw.sites));
          for (std::size_t i = 0; i < raw.n_shots(); ++i) {
            auto s = raw.shot(i);
            std::copy(s.begin(), s.end(), shot.begin());
            apply_readout(shot, *plan.readout, rng);
            corrupted.append(shot);
          }
          raw = std::move(corrupted);
        }
        if (use_shots) {
          missing = !record_shot_time_point(rec, t, raw, ctx) || missing;
        } else {
          // Exact open-system run at large size: populations from the
          // trajectory average, distribution-based quantities from the
          // endpoint samples.
          rec.populations[t] = open.populations[t];
          rec.autocorrelation_t[t] = autocorrelation(rec.populations[t], pop0);
          rec.block_dists[t].clear();
          for (int m = 1; m <= half_block; ++m)
            rec.block_dists[t].push_back(block_number_distribution(raw, m, n_total));
          rec.number_entropy_t[t] = number_entropy(rec.block_dists[t].back());
          rec.hamming_t[t] = hamming_distance(raw, initial);
        }
      } else {
        rec.populations[t] = open.populations[t];
        rec.autocorrelation_t[t] = autocorrelation(rec.populations[t], pop0);
        rec.block_dists[t].clear();
        for (int m = 1; m <= half_block; ++m)
          rec.block_dists[t].push_back(
              block_number_distribution(basis, open.diagonal[t], m));
        rec.number_entropy_t[t] = number_entropy(rec.block_dists[t].back());
        rec.hamming_t[t] = hamming_distance(basis, open.diagonal[t], initial);
      }
    }
  }

  if (missing)
    throw EstimationError("run_quench: post-selection left no shots for state " +
                          std::to_string(state_index) + " r=" + std::to_string(realization) +
                          " h_index=" + std::to_string(h_index));
  finalize_eq_values(rec);
  return rec;
}

SweepResult run_sweep(const ModelSpec& spec, const std::optional<NoiseSpec>& noise,
                      const RunPlan& plan, const SweepSettings& settings) {
  spec.validate();
  plan.validate(spec.sites);
  const int n_states = static_cast<int>(plan.initial_states.size());
  const int n_h = static_cast<int>(plan.disorder_grid.size());
  const int n_total = plan.filling_total(spec.sites);

  SweepResult result;
  result.table = EnsembleTable(n_states, plan.realizations, plan.disorder_grid);
  result.table.sites = spec.sites;
  result.table.cap = spec.cap;
  result.table.n_total = n_total;
  result.table.eq_times = plan.eq_times;
  result.table.master_seed = plan.master_seed;
  result.table.mode = std::string(plan.mode == RunMode::kExact ? "exact" : "shots") +
                      (noise ? "+noise" : "");
  std::mutex failure_mutex;

  auto store_cell = [&](Quantity q, int s, int r, int h, const QuenchRecord& rec) {
    auto& cell = result.table.cell(q, s, r, h);
    cell.q_eq = rec.q_eq(q);
    cell.per_time.clear();
    const auto values = rec.per_time(q);
    for (std::size_t i = 0; i < rec.times.size(); ++i)
      if (rec.is_eq_time[i]) cell.per_time.push_back(values[i]);
    cell.retention = rec.retention;
    cell.seed = rec.disorder_seed;
    cell.valid = true;
  };

  if (!noise) {
    // Closed system: one Lanczos block per (realization, h) pair carries all
    // initial states through the same Hamiltonian.
    const SectorBasis basis(spec.sites, n_total, spec.cap);
    const int half_block = std::max(1, spec.sites / 2);
    const std::size_t n_cells = static_cast<std::size_t>(plan.realizations) * n_h;

    parallel_for(n_cells, settings.jobs, [&](std::size_t job) {
      const int r = static_cast<int>(job) / n_h;
      const int h_index = static_cast<int>(job) % n_h;
      try {
        const auto seed = derive_seed(plan.master_seed,
                                      {stream_purpose::kDisorder,
                                       static_cast<std::uint64_t>(r),
                                       static_cast<std::uint64_t>(h_index)});
        const auto disorder = sample_disorder(
            plan.disorder_grid[static_cast<std::size_t>(h_index)], spec.sites, seed);
        const auto h = build_hamiltonian(spec, disorder, basis);

        const int k = n_states;
        std::vector<Amplitude> block(basis.size() * static_cast<std::size_t>(k),
                                     Amplitude(0.0));
        for (int s = 0; s < k; ++s) {
          const auto idx = basis.state_index(plan.initial_states[static_cast<std::size_t>(s)]);
          if (!idx) throw ParameterError("run_sweep: initial state not in sector");
          block[*idx * static_cast<std::size_t>(k) + static_cast<std::size_t>(s)] = 1.0;
        }

        std::vector<QuenchRecord> records;
        records.reserve(static_cast<std::size_t>(k));
        std::vector<std::vector<double>> pop0s;
        std::vector<bool> eq_mask(plan.eq_times.size(), true);
        for (int s = 0; s < k; ++s) {
          records.push_back(make_record_shell(plan, s, r, h_index, plan.eq_times,
                                              eq_mask, spec.sites));
          pop0s.push_back(ideal_populations(plan.initial_states[static_cast<std::size_t>(s)]));
          if (plan.mode == RunMode::kShots) {
            records.back().raw_shots.assign(plan.eq_times.size(), ShotTable{spec.sites, {}, {}});
            records.back().kept_shots.assign(plan.eq_times.size(), ShotTable{spec.sites, {}, {}});
            records.back().retention = 0.0;
          }
        }

        BlockLanczosPropagator prop(h, k, settings.solver.krylov);
        StateVector psi(basis.size());
        std::vector<bool> missing(static_cast<std::size_t>(k), false);
        double t = 0.0;
        for (std::size_t ti = 0; ti < plan.eq_times.size(); ++ti) {
          prop.advance(block.data(), plan.eq_times[ti] - t);
          t = plan.eq_times[ti];
          for (int s = 0; s < k; ++s) {
            for (std::size_t i = 0; i < basis.size(); ++i)
              psi[i] = block[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(s)];
            const RecordContext ctx{plan, plan.initial_states[static_cast<std::size_t>(s)],
                                    pop0s[static_cast<std::size_t>(s)], half_block, n_total};
            if (plan.mode == RunMode::kExact) {
              record_exact_time_point(records[static_cast<std::size_t>(s)], ti, psi, basis,
                                      ctx);
            } else {
              RngStream rng(derive_seed(plan.master_seed,
                                        {stream_purpose::kShots,
                                         static_cast<std::uint64_t>(s),
                                         static_cast<std::uint64_t>(r),
                                         static_cast<std::uint64_t>(h_index),
                                         static_cast<std::uint64_t>(ti)}));
              auto raw = sample_shots(psi, basis, plan.shots, plan.readout, rng);
              if (!record_shot_time_point(records[static_cast<std::size_t>(s)], ti, raw, ctx))
                missing[static_cast<std::size_t>(s)] = true;
            }
          }
        }
        for (int s = 0; s < k; ++s) {
          if (missing[static_cast<std::size_t>(s)]) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            result.failures.push_back("post-selection emptied cell s=" + std::to_string(s) +
                                      " r=" + std::to_string(r) +
                                      " h_index=" + std::to_string(h_index));
            continue;
          }
          finalize_eq_values(records[static_cast<std::size_t>(s)]);
          for (Quantity q : kAllQuantities)
            store_cell(q, s, r, h_index, records[static_cast<std::size_t>(s)]);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        result.failures.push_back("cell r=" + std::to_string(r) +
                                  " h_index=" + std::to_string(h_index) + ": " + e.what());
      }
    });
  } else {
    const std::size_t n_cells =
        static_cast<std::size_t>(n_states) * plan.realizations * n_h;
    parallel_for(n_cells, settings.jobs, [&](std::size_t job) {
      const int s = static_cast<int>(job / (static_cast<std::size_t>(plan.realizations) * n_h));
      const int r = static_cast<int>((job / n_h) % static_cast<std::size_t>(plan.realizations));
      const int h_index = static_cast<int>(job % static_cast<std::size_t>(n_h));
      try {
        auto rec = run_quench(spec, noise, plan, s, r, h_index, {}, settings.solver, 1);
        for (Quantity q : kAllQuantities) store_cell(q, s, r, h_index, rec);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        result.failures.push_back("cell s=" + std::to_string(s) + " r=" + std::to_string(r) +
                                  " h_index=" + std::to_string(h_index) + ": " + e.what());
      }
    });
  }
  return result;
}

}  // namespace quenchlab
