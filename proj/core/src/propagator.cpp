// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "quenchlab/errors.hpp"

namespace quenchlab {

double state_norm(std::span<const Amplitude> psi) {
  double acc = 0.0;
  for (const auto& a : psi) acc += std::norm(a);
  return std::sqrt(acc);
}

StateVector fock_state(const SectorBasis& basis, const Configuration& c) {
  const auto idx = basis.state_index(c);
  if (!idx) throw ParameterError("fock_state: configuration not in sector");
  StateVector psi(basis.size(), Amplitude(0.0));
  psi[*idx] = Amplitude(1.0);
  return psi;
}

UnitaryTrajectory evolve_unitary(const SparseHermitian& h, const StateVector& psi0,
                                 std::vector<double> times, KrylovOptions options) {
  if (psi0.size() != h.dim())
    throw ParameterError("evolve_unitary: state/matrix dimension mismatch");
  if (std::abs(state_norm(psi0) - 1.0) > 1e-10)
    throw ParameterError("evolve_unitary: input state is not normalized");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw ParameterError("evolve_unitary: times must be non-negative and sorted");
  }

  UnitaryTrajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  StateVector psi = psi0;
  BlockLanczosPropagator prop(h, 1, options);
  double t = 0.0;
  for (double target : times) {
    prop.advance(psi.data(), target - t);
    t = target;
    traj.states.push_back(psi);
  }
  return traj;
}

double truncation_leakage(std::span<const Amplitude> psi, const SectorBasis& basis,
                          int site) {
  if (site < 0 || site >= basis.sites())
    throw ParameterError("truncation_leakage: site out of range");
  double p_cap = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis.state(i)[static_cast<std::size_t>(site)] == basis.cap())
      p_cap += std::norm(psi[i]);
  }
  return (basis.cap() + 1.0) * p_cap;
}

double max_truncation_leakage(std::span<const Amplitude> psi, const SectorBasis& basis) {
  double m = 0.0;
  for (int l = 0; l < basis.sites(); ++l)
    m = std::max(m, truncation_leakage(psi, basis, l));
  return m;
}

}  // namespace quenchlab
