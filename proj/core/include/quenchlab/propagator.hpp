// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_PROPAGATOR_HPP
#define QUENCHLAB_PROPAGATOR_HPP

#include <complex>
#include <span>
#include <vector>

#include "quenchlab/fock_basis.hpp"
#include "quenchlab/hamiltonian.hpp"
#include "quenchlab/krylov.hpp"

namespace quenchlab {

using Amplitude = std::complex<double>;
using StateVector = std::vector<Amplitude>;

double state_norm(std::span<const Amplitude> psi);

/// Basis vector |c> within a sector.
StateVector fock_state(const SectorBasis& basis, const Configuration& c);

struct UnitaryTrajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
};

/// exp(-i H t_i) psi0 at each requested time (times must be non-decreasing
/// and non-negative; propagation continues segment to segment).
UnitaryTrajectory evolve_unitary(const SparseHermitian& h, const StateVector& psi0,
                                 std::vector<double> times, KrylovOptions options = {});

/// Truncation-control diagnostic |<[a_l, a+_l]> - 1| for the capped ladder
/// algebra: equals (cap+1) * P(n_l = cap).
double truncation_leakage(std::span<const Amplitude> psi, const SectorBasis& basis,
                          int site);

/// Maximum of truncation_leakage over all sites.
double max_truncation_leakage(std::span<const Amplitude> psi, const SectorBasis& basis);

}  // namespace quenchlab

#endif
