// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/lindblad.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <memory>
#include <numeric>

#include "quenchlab/errors.hpp"
#include "quenchlab/rng.hpp"
#include "quenchlab/thread_pool.hpp"

namespace quenchlab {

namespace {
using Complex = std::complex<double>;
}

NoiseSpec NoiseSpec::uniform(int sites, double decay, double dephasing) {
  NoiseSpec n;
  n.decay_rates.assign(static_cast<std::size_t>(sites), decay);
  n.dephasing_rates.assign(static_cast<std::size_t>(sites), dephasing);
  n.validate(sites);
  return n;
}

NoiseSpec NoiseSpec::from_device_times(std::span<const double> t1_us,
                                       std::span<const double> t2_us,
                                       const DeviceUnits& units) {
  NoiseSpec n;
  for (double t : t1_us) n.decay_rates.push_back(units.rate_from_inverse_us(t));
  for (double t : t2_us) n.dephasing_rates.push_back(units.rate_from_inverse_us(t));
  n.validate(static_cast<int>(t1_us.size()));
  return n;
}

NoiseSpec NoiseSpec::scaled(double factor) const {
  NoiseSpec n = *this;
  for (auto& r : n.decay_rates) r *= factor;
  for (auto& r : n.dephasing_rates) r *= factor;
  return n;
}

void NoiseSpec::validate(int sites) const {
  if (static_cast<int>(decay_rates.size()) != sites ||
      static_cast<int>(dephasing_rates.size()) != sites)
    throw ParameterError("NoiseSpec: rate vectors must have one entry per site");
  for (double r : decay_rates)
    if (!(r >= 0.0)) throw ParameterError("NoiseSpec: decay rates must be >= 0");
  for (double r : dephasing_rates)
    if (!(r >= 0.0)) throw ParameterError("NoiseSpec: dephasing rates must be >= 0");
}

bool NoiseSpec::all_zero() const {
  auto zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  return zero(decay_rates) && zero(dephasing_rates);
}

DirectSumBasis::DirectSumBasis(int sites, int top_total, int cap)
    : sites_(sites), top_total_(top_total), cap_(cap) {
  if (top_total < 0) throw ParameterError("DirectSumBasis: top_total must be >= 0");
  sectors_.reserve(static_cast<std::size_t>(top_total + 1));
  offsets_.assign(static_cast<std::size_t>(top_total + 1), 0);
  for (int n = 0; n <= top_total; ++n) sectors_.emplace_back(sites, n, cap);
  std::size_t off = 0;
  for (int n = 0; n <= top_total; ++n) {
    offsets_[static_cast<std::size_t>(n)] = off;
    off += sectors_[static_cast<std::size_t>(n)].size();
  }
  dim_ = off;
}

namespace {

// Shared machinery for both unravelings: per-sector Hamiltonians, the damping
// diagonal sum_l (Gamma_l n_l + gamma_l n_l^2), and the per-site lowering maps
// between adjacent sectors.
class LindbladModel {
 public:
  LindbladModel(const ModelSpec& spec, const DisorderRealization& dis,
                const NoiseSpec& noise, int top_total)
      : basis_(spec.sites, top_total, spec.cap), noise_(noise) {
    noise_.validate(spec.sites);
    for (int n = 0; n <= top_total; ++n)
      h_.push_back(build_hamiltonian(spec, dis, basis_.sector(n)));
    damping_.assign(basis_.dim(), 0.0);
    for (int n = 0; n <= top_total; ++n) {
      const auto& sec = basis_.sector(n);
      for (std::size_t i = 0; i < sec.size(); ++i) {
        auto c = sec.state(i);
        double d = 0.0;
        for (int l = 0; l < sec.sites(); ++l) {
          const double nl = c[static_cast<std::size_t>(l)];
          d += noise_.decay_rates[static_cast<std::size_t>(l)] * nl +
               noise_.dephasing_rates[static_cast<std::size_t>(l)] * nl * nl;
        }
        damping_[basis_.offset(n) + i] = d;
      }
    }
    // lower_[n][l]: (target index in sector n-1, sqrt(c_l)) per source state.
    lower_.resize(static_cast<std::size_t>(top_total + 1));
    Configuration tmp(static_cast<std::size_t>(spec.sites));
    for (int n = 1; n <= top_total; ++n) {
      auto& per_site = lower_[static_cast<std::size_t>(n)];
      per_site.resize(static_cast<std::size_t>(spec.sites));
      const auto& src = basis_.sector(n);
      const auto& dst = basis_.sector(n - 1);
      for (int l = 0; l < spec.sites; ++l) {
        auto& map = per_site[static_cast<std::size_t>(l)];
        map.assign(src.size(), {-1, 0.0});
        for (std::size_t i = 0; i < src.size(); ++i) {
          auto c = src.state(i);
          if (c[static_cast<std::size_t>(l)] == 0) continue;
          std::copy(c.begin(), c.end(), tmp.begin());
          tmp[static_cast<std::size_t>(l)] -= 1;
          const auto j = dst.state_index(tmp);
          if (!j) throw SolverError("LindbladModel: lowering left the space");
          map[i] = {static_cast<std::int64_t>(*j),
                    std::sqrt(static_cast<double>(c[static_cast<std::size_t>(l)]))};
        }
      }
    }
  }

  const DirectSumBasis& basis() const { return basis_; }
  const NoiseSpec& noise() const { return noise_; }
  const SparseHermitian& sector_h(int n) const { return h_[static_cast<std::size_t>(n)]; }
  const std::vector<double>& damping() const { return damping_; }
  /// (target index in sector n-1, sqrt(n_l)) per state of sector n; -1 if empty.
  const std::vector<std::pair<std::int64_t, double>>& lowering(int n, int l) const {
    return lower_[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)];
  }

  double spread_hint() const {
    double lo = 0, hi = 0;
    for (const auto& h : h_) {
      auto [a, b] = h.gershgorin_interval();
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    return 0.5 * (hi - lo) + 0.5;
  }

  /// y = (H - i/2 D) x over the full direct sum.
  void apply_h_eff(const Complex* x, Complex* y) const {
    for (int n = 0; n <= basis_.top_total(); ++n) {
      const std::size_t off = basis_.offset(n);
      h_[static_cast<std::size_t>(n)].apply(x + off, y + off);
    }
    for (std::size_t i = 0; i < basis_.dim(); ++i)
      y[i] -= Complex(0.0, 0.5) * damping_[i] * x[i];
  }

  /// ||a_l psi||^2 without forming the lowered state.
  double decay_weight(const Complex* x, int l) const {
    double acc = 0.0;
    for (int n = 1; n <= basis_.top_total(); ++n) {
      const auto& map = lower_[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)];
      const std::size_t off = basis_.offset(n);
      for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i].first >= 0)
          acc += map[i].second * map[i].second * std::norm(x[off + i]);
    }
    return acc;
  }

  double dephasing_weight(const Complex* x, int l) const {
    double acc = 0.0;
    for (int n = 0; n <= basis_.top_total(); ++n) {
      const auto& sec = basis_.sector(n);
      const std::size_t off = basis_.offset(n);
      for (std::size_t i = 0; i < sec.size(); ++i) {
        const double nl = sec.state(i)[static_cast<std::size_t>(l)];
        acc += nl * nl * std::norm(x[off + i]);
      }
    }
    return acc;
  }

  void apply_lowering(const Complex* x, Complex* y, int l) const {
    std::fill(y, y + basis_.dim(), Complex(0.0));
    for (int n = 1; n <= basis_.top_total(); ++n) {
      const auto& map = lower_[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)];
      const std::size_t src_off = basis_.offset(n);
      const std::size_t dst_off = basis_.offset(n - 1);
      for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i].first >= 0)
          y[dst_off + static_cast<std::size_t>(map[i].first)] +=
              map[i].second * x[src_off + i];
    }
  }

  void apply_number(const Complex* x, Complex* y, int l) const {
    for (int n = 0; n <= basis_.top_total(); ++n) {
      const auto& sec = basis_.sector(n);
      const std::size_t off = basis_.offset(n);
      for (std::size_t i = 0; i < sec.size(); ++i)
        y[off + i] = static_cast<double>(sec.state(i)[static_cast<std::size_t>(l)]) * x[off + i];
    }
  }

  std::vector<double> populations(const Complex* x) const {
    std::vector<double> pop(static_cast<std::size_t>(basis_.sites()), 0.0);
    double norm2 = 0.0;
    for (int n = 0; n <= basis_.top_total(); ++n) {
      const auto& sec = basis_.sector(n);
      const std::size_t off = basis_.offset(n);
      for (std::size_t i = 0; i < sec.size(); ++i) {
        const double w = std::norm(x[off + i]);
        if (w == 0.0) continue;
        norm2 += w;
        auto c = sec.state(i);
        for (int l = 0; l < sec.sites(); ++l)
          pop[static_cast<std::size_t>(l)] += w * c[l];
      }
    }
    for (auto& p : pop) p /= norm2;
    return pop;
  }

  Configuration configuration_at(std::size_t flat_index) const {
    for (int n = basis_.top_total(); n >= 0; --n) {
      const std::size_t off = basis_.offset(n);
      if (flat_index >= off && flat_index < off + basis_.sector(n).size()) {
        auto s = basis_.sector(n).state(flat_index - off);
        return Configuration(s.begin(), s.end());
      }
    }
    throw ParameterError("LindbladModel: flat index out of range");
  }

 private:
  DirectSumBasis basis_;
  NoiseSpec noise_;
  std::vector<SparseHermitian> h_;
  std::vector<double> damping_;
  // lower_[n][l][i] = (index in sector n-1, sqrt(n_l)); first = -1 if n_l = 0
  std::vector<std::vector<std::vector<std::pair<std::int64_t, double>>>> lower_;
};

struct TrajectoryScratch {
  std::vector<Complex> psi, jumped;
};

// One quantum trajectory; populations (and optional endpoint configurations)
// are recorded at each requested time.
long run_single_trajectory(const LindbladModel& model, const StateVector& psi0_top,
                           const std::vector<double>& times,
                           const LindbladOptions& opt, std::uint64_t seed,
                           ArnoldiPropagator& prop, TrajectoryScratch& scratch,
                           std::vector<double>& pop_out,
                           std::vector<std::size_t>* endpoint_indices) {
  const auto& basis = model.basis();
  const int sites = basis.sites();
  scratch.psi.assign(basis.dim(), Complex(0.0));
  std::copy(psi0_top.begin(), psi0_top.end(),
            scratch.psi.begin() + static_cast<std::ptrdiff_t>(basis.offset(basis.top_total())));
  scratch.jumped.resize(basis.dim());

  RngStream rng(seed);
  const double t_final = times.empty() ? 0.0 : times.back();
  const double t_res = opt.jump_time_resolution * std::max(1.0, t_final);

  long jumps = 0;
  double t = 0.0;
  double threshold = rng.uniform();
  const int n_channels = 2 * sites;
  std::vector<double> weights(static_cast<std::size_t>(n_channels));

  for (std::size_t k = 0; k < times.size(); ++k) {
    while (t < times[k]) {
      const double advanced =
          prop.advance(scratch.psi.data(), times[k] - t, threshold, t_res);
      t += advanced;
      if (advanced < (times[k] - (t - advanced)) * (1.0 - 1e-14)) {
        // Jump at time t: pick a channel with probability ~ rate * ||L psi||^2.
        const auto& noise = model.noise();
        double total = 0.0;
        for (int l = 0; l < sites; ++l) {
          weights[static_cast<std::size_t>(2 * l)] =
              noise.decay_rates[static_cast<std::size_t>(l)] *
              model.decay_weight(scratch.psi.data(), l);
          weights[static_cast<std::size_t>(2 * l + 1)] =
              noise.dephasing_rates[static_cast<std::size_t>(l)] *
              model.dephasing_weight(scratch.psi.data(), l);
          total += weights[static_cast<std::size_t>(2 * l)] +
                   weights[static_cast<std::size_t>(2 * l + 1)];
        }
        if (total <= 0.0)
          throw SolverError("trajectory: norm crossed threshold with zero jump rates");
        double pick = rng.uniform() * total;
        int channel = n_channels - 1;
        for (int c = 0; c < n_channels; ++c) {
          pick -= weights[static_cast<std::size_t>(c)];
          if (pick <= 0.0) {
            channel = c;
            break;
          }
        }
        const int l = channel / 2;
        if (channel % 2 == 0)
          model.apply_lowering(scratch.psi.data(), scratch.jumped.data(), l);
        else
          model.apply_number(scratch.psi.data(), scratch.jumped.data(), l);
        std::swap(scratch.psi, scratch.jumped);
        double n2 = 0.0;
        for (const auto& a : scratch.psi) n2 += std::norm(a);
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : scratch.psi) a *= inv;
        threshold = rng.uniform();
        ++jumps;
      }
    }
    const auto pop = model.populations(scratch.psi.data());
    std::copy(pop.begin(), pop.end(),
              pop_out.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(sites)));
    if (endpoint_indices) {
      double n2 = 0.0;
      for (const auto& a : scratch.psi) n2 += std::norm(a);
      double pick = rng.uniform() * n2;
      std::size_t idx = basis.dim() - 1;
      for (std::size_t i = 0; i < basis.dim(); ++i) {
        pick -= std::norm(scratch.psi[i]);
        if (pick <= 0.0) {
          idx = i;
          break;
        }
      }
      (*endpoint_indices)[k] = idx;
    }
  }
  return jumps;
}

LindbladTrajectory run_trajectories(const LindbladModel& model, const StateVector& psi0,
                                    const std::vector<double>& times,
                                    const LindbladOptions& opt, unsigned n_threads) {
  const int sites = model.basis().sites();
  const std::size_t nt = times.size();
  const int m = opt.n_trajectories;
  if (m < 1) throw ParameterError("evolve_lindblad: need >= 1 trajectory");

  std::vector<std::vector<double>> pops(static_cast<std::size_t>(m));
  std::vector<std::vector<std::size_t>> endpoints(
      opt.sample_endpoint_shots ? static_cast<std::size_t>(m) : 0);
  std::vector<long> jumps(static_cast<std::size_t>(m), 0);

  const unsigned workers = std::max(1u, n_threads);
  std::vector<std::unique_ptr<ArnoldiPropagator>> props(workers);
  std::vector<TrajectoryScratch> scratch(workers);
  std::atomic<unsigned> next_slot{0};
  thread_local int slot_id = -1;  // assigned once per worker thread

  KrylovOptions kopt = opt.krylov;
  kopt.max_basis = std::min(kopt.max_basis, 32);
  const double spread = model.spread_hint();

  parallel_for(static_cast<std::size_t>(m), workers, [&](std::size_t i) {
    if (slot_id < 0) slot_id = static_cast<int>(next_slot.fetch_add(1) % workers);
    auto& prop = props[static_cast<std::size_t>(slot_id)];
    if (!prop)
      prop = std::make_unique<ArnoldiPropagator>(
          [&model](const Complex* x, Complex* y) { model.apply_h_eff(x, y); },
          model.basis().dim(), spread, kopt);
    pops[i].assign(nt * static_cast<std::size_t>(sites), 0.0);
    if (opt.sample_endpoint_shots) endpoints[i].assign(nt, 0);
    jumps[i] = run_single_trajectory(
        model, psi0, times, opt, derive_seed(opt.seed, {stream_purpose::kTrajectory, i}),
        *prop, scratch[static_cast<std::size_t>(slot_id)], pops[i],
        opt.sample_endpoint_shots ? &endpoints[i] : nullptr);
  });

  LindbladTrajectory out;
  out.method = LindbladMethod::kTrajectories;
  out.times = times;
  out.n_trajectories = m;
  out.total_jumps = std::accumulate(jumps.begin(), jumps.end(), 0L);
  out.populations.assign(nt, std::vector<double>(static_cast<std::size_t>(sites), 0.0));
  out.std_errors.assign(nt, std::vector<double>(static_cast<std::size_t>(sites), 0.0));
  for (std::size_t k = 0; k < nt; ++k) {
    for (int l = 0; l < sites; ++l) {
      double mean = 0.0;
      for (int i = 0; i < m; ++i)
        mean += pops[static_cast<std::size_t>(i)][k * static_cast<std::size_t>(sites) + l];
      mean /= m;
      double var = 0.0;
      for (int i = 0; i < m; ++i) {
        const double d =
            pops[static_cast<std::size_t>(i)][k * static_cast<std::size_t>(sites) + l] - mean;
        var += d * d;
      }
      var = m > 1 ? var / (m - 1) : 0.0;
      out.populations[k][static_cast<std::size_t>(l)] = mean;
      out.std_errors[k][static_cast<std::size_t>(l)] = std::sqrt(var / m);
    }
  }
  if (opt.sample_endpoint_shots) {
    out.shots.assign(nt, ShotTable{sites, {}, {}});
    for (std::size_t k = 0; k < nt; ++k)
      for (int i = 0; i < m; ++i)
        out.shots[k].append(model.configuration_at(endpoints[static_cast<std::size_t>(i)][k]));
  }
  return out;
}

LindbladTrajectory run_dense(const LindbladModel& model, const StateVector& psi0,
                             const std::vector<double>& times,
                             const LindbladOptions& opt) {
  namespace ode = boost::numeric::odeint;
  const auto& basis = model.basis();
  if (basis.dim() > opt.dense_dim_cap)
    throw ParameterError(
        "evolve_lindblad: direct-sum dimension " + std::to_string(basis.dim()) +
        " exceeds the dense cap " + std::to_string(opt.dense_dim_cap) +
        "; use the trajectories method");

  const int top = basis.top_total();
  const int sites = basis.sites();
  // Flat storage of the per-sector density blocks (rho stays block-diagonal:
  // the initial state is a single-sector pure state and every Lindblad term
  // maps sector-diagonal operators to sector-diagonal ones).
  std::vector<std::size_t> block_off(static_cast<std::size_t>(top + 1), 0);
  std::size_t total = 0;
  for (int n = 0; n <= top; ++n) {
    block_off[static_cast<std::size_t>(n)] = total;
    total += basis.sector(n).size() * basis.sector(n).size();
  }
  using Flat = std::vector<Complex>;
  Flat rho(total, Complex(0.0));
  {
    const std::size_t d = basis.sector(top).size();
    const std::size_t off = block_off[static_cast<std::size_t>(top)];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        rho[off + i * d + j] = psi0[i] * std::conj(psi0[j]);
  }

  // Cached per-sector occupations (as doubles) for the diagonal pieces.
  std::vector<std::vector<double>> occ(static_cast<std::size_t>(top + 1));
  for (int n = 0; n <= top; ++n) {
    const auto& sec = basis.sector(n);
    occ[static_cast<std::size_t>(n)].resize(sec.size() * static_cast<std::size_t>(sites));
    for (std::size_t i = 0; i < sec.size(); ++i)
      for (int l = 0; l < sites; ++l)
        occ[static_cast<std::size_t>(n)][i * static_cast<std::size_t>(sites) + l] =
            sec.state(i)[static_cast<std::size_t>(l)];
  }
  const auto& noise = model.noise();
  const auto& damping = model.damping();

  std::vector<Complex> work(total);
  auto rhs = [&](const Flat& z, Flat& dz, double) {
    std::fill(dz.begin(), dz.end(), Complex(0.0));
    for (int n = 0; n <= top; ++n) {
      const auto& sec = basis.sector(n);
      const std::size_t d = sec.size();
      const std::size_t off = block_off[static_cast<std::size_t>(n)];
      const std::size_t voff = basis.offset(n);
      const Complex* r = z.data() + off;
      Complex* out = dz.data() + off;

      // -i [H, rho]: C = H rho, then -i (C - C+).
      Complex* c = work.data() + off;
      model.sector_h(n).apply_block(r, c, static_cast<int>(d));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          out[i * d + j] = Complex(0.0, -1.0) * (c[i * d + j] - std::conj(c[j * d + i]));

      // Anticommutator damping and the sector-preserving dephasing feed.
      for (std::size_t i = 0; i < d; ++i) {
        const double di = damping[voff + i];
        for (std::size_t j = 0; j < d; ++j) {
          const double dj = damping[voff + j];
          double q = 0.0;
          for (int l = 0; l < sites; ++l)
            q += noise.dephasing_rates[static_cast<std::size_t>(l)] *
                 occ[static_cast<std::size_t>(n)][i * static_cast<std::size_t>(sites) + l] *
                 occ[static_cast<std::size_t>(n)][j * static_cast<std::size_t>(sites) + l];
          out[i * d + j] += (q - 0.5 * (di + dj)) * r[i * d + j];
        }
      }
    }
    // Decay feed: rho_n gains Gamma_l A_l rho_{n+1} A_l+.
    for (int n = 0; n < top; ++n) {
      const std::size_t ds = basis.sector(n + 1).size();
      const std::size_t dd = basis.sector(n).size();
      const std::size_t soff = block_off[static_cast<std::size_t>(n + 1)];
      const std::size_t doff = block_off[static_cast<std::size_t>(n)];
      for (int l = 0; l < sites; ++l) {
        const double rate = noise.decay_rates[static_cast<std::size_t>(l)];
        if (rate == 0.0) continue;
        const auto& map = model.lowering(n + 1, l);
        for (std::size_t i = 0; i < ds; ++i) {
          if (map[i].first < 0) continue;
          const std::size_t ti = static_cast<std::size_t>(map[i].first);
          const double ai = map[i].second;
          for (std::size_t j = 0; j < ds; ++j) {
            if (map[j].first < 0) continue;
            dz[doff + ti * dd + static_cast<std::size_t>(map[j].first)] +=
                rate * ai * map[j].second * z[soff + i * ds + j];
          }
        }
      }
    }
  };

  LindbladTrajectory out;
  out.method = LindbladMethod::kDense;
  out.times = times;
  out.populations.assign(times.size(), std::vector<double>(static_cast<std::size_t>(sites), 0.0));
  out.trace.assign(times.size(), 0.0);
  if (opt.record_diagonal)
    out.diagonal.assign(times.size(), std::vector<double>(basis.dim(), 0.0));

  auto record = [&](std::size_t k) {
    double tr = 0.0;
    for (int n = 0; n <= top; ++n) {
      const auto& sec = basis.sector(n);
      const std::size_t d = sec.size();
      const std::size_t off = block_off[static_cast<std::size_t>(n)];
      for (std::size_t i = 0; i < d; ++i) {
        const double pii = rho[off + i * d + i].real();
        tr += pii;
        if (opt.record_diagonal) out.diagonal[k][basis.offset(n) + i] = pii;
        for (int l = 0; l < sites; ++l)
          out.populations[k][static_cast<std::size_t>(l)] +=
              pii * occ[static_cast<std::size_t>(n)][i * static_cast<std::size_t>(sites) + l];
      }
    }
    out.trace[k] = tr;
  };

  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<Flat>>(opt.dense_abs_tol,
                                                                     opt.dense_rel_tol);
  double t = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] > t) {
      ode::integrate_adaptive(stepper, rhs, rho, t, times[k],
                              std::min(0.01, times[k] - t));
      t = times[k];
    }
    record(k);
  }
  return out;
}

}  // namespace

LindbladTrajectory evolve_lindblad(const ModelSpec& spec,
                                   const DisorderRealization& disorder,
                                   const NoiseSpec& noise, const Configuration& initial,
                                   std::vector<double> times, LindbladMethod method,
                                   const LindbladOptions& options, unsigned n_threads) {
  spec.validate();
  int total = 0;
  for (auto v : initial) total += v;
  if (static_cast<int>(initial.size()) != spec.sites)
    throw ParameterError("evolve_lindblad: initial configuration length mismatch");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw ParameterError("evolve_lindblad: times must be non-negative and sorted");
  if (options.record_diagonal && method == LindbladMethod::kTrajectories)
    throw ParameterError(
        "evolve_lindblad: record_diagonal requires the dense method; trajectories "
        "provide endpoint shots instead");

  LindbladModel model(spec, disorder, noise, total);
  const StateVector psi0 = fock_state(model.basis().sector(total), initial);
  if (method == LindbladMethod::kDense) return run_dense(model, psi0, times, options);
  return run_trajectories(model, psi0, times, options, n_threads);
}

BlockNumberDistribution block_number_distribution(const DirectSumBasis& basis,
                                                  std::span<const double> diagonal,
                                                  int block_size) {
  if (block_size < 1 || block_size > basis.sites())
    throw ParameterError("block_number_distribution: block size out of range");
  if (diagonal.size() != basis.dim())
    throw ParameterError("block_number_distribution: diagonal/basis size mismatch");
  const int nmax = std::min(basis.top_total(), block_size * basis.cap());
  BlockNumberDistribution dist;
  dist.block_size = block_size;
  dist.p.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
  double total = 0.0;
  for (int n = 0; n <= basis.top_total(); ++n) {
    const auto& sec = basis.sector(n);
    const std::size_t off = basis.offset(n);
    for (std::size_t i = 0; i < sec.size(); ++i) {
      const double w = diagonal[off + i];
      total += w;
      int b = 0;
      auto c = sec.state(i);
      for (int l = 0; l < block_size; ++l) b += c[static_cast<std::size_t>(l)];
      dist.p[static_cast<std::size_t>(b)] += w;
    }
  }
  if (total > 0.0)
    for (auto& p : dist.p) p /= total;
  return dist;
}

double hamming_distance(const DirectSumBasis& basis, std::span<const double> diagonal,
                        const Configuration& reference) {
  if (static_cast<int>(reference.size()) != basis.sites())
    throw ParameterError("hamming_distance: reference length mismatch");
  if (diagonal.size() != basis.dim())
    throw ParameterError("hamming_distance: diagonal/basis size mismatch");
  double acc = 0.0, total = 0.0;
  for (int n = 0; n <= basis.top_total(); ++n) {
    const auto& sec = basis.sector(n);
    const std::size_t off = basis.offset(n);
    for (std::size_t i = 0; i < sec.size(); ++i) {
      const double w = diagonal[off + i];
      if (w == 0.0) continue;
      total += w;
      auto c = sec.state(i);
      int flips = 0;
      for (std::size_t l = 0; l < reference.size(); ++l)
        if (c[l] != reference[l]) ++flips;
      acc += w * static_cast<double>(flips) / static_cast<double>(reference.size());
    }
  }
  return total > 0.0 ? acc / total : 0.0;
}

}  // namespace quenchlab
