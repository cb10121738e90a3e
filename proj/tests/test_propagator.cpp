// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "quenchlab/errors.hpp"
#include "quenchlab/propagator.hpp"
#include "quenchlab/rng.hpp"

using namespace quenchlab;

namespace {

// Full eigendecomposition propagator, the oracle for the Krylov kernel.
StateVector dense_evolve(const SparseHermitian& h, const StateVector& psi0, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.to_dense());
  Eigen::VectorXcd v(psi0.size());
  for (std::size_t i = 0; i < psi0.size(); ++i) v(static_cast<Eigen::Index>(i)) = psi0[i];
  Eigen::VectorXcd w = es.eigenvectors().transpose() * v;
  for (Eigen::Index j = 0; j < w.size(); ++j)
    w(j) *= std::polar(1.0, -t * es.eigenvalues()(j));
  Eigen::VectorXcd out = es.eigenvectors() * w;
  StateVector psi(psi0.size());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = out(static_cast<Eigen::Index>(i));
  return psi;
}

double l2_distance(const StateVector& a, const StateVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

StateVector random_state(std::size_t dim, RngStream& rng) {
  StateVector psi(dim);
  for (auto& a : psi) a = {rng.normal(), rng.normal()};
  const double n = state_norm(psi);
  for (auto& a : psi) a /= n;
  return psi;
}

SparseHermitian random_instance(int sites, int total, int cap, RngStream& rng,
                                SectorBasis& basis_out) {
  basis_out = SectorBasis(sites, total, cap);
  ModelSpec spec = ModelSpec::uniform(sites, cap);
  for (auto& j : spec.j1) j = rng.uniform(0.5, 1.5);
  for (auto& j : spec.j2) j = rng.uniform(0.0, 0.3);
  spec.u = rng.uniform(-25.0, -10.0);
  auto dis = sample_disorder(rng.uniform(0.0, 7.0), sites, rng.next_u64());
  return build_hamiltonian(spec, dis, basis_out);
}

}  // namespace

TEST_CASE("t = 0 returns the input exactly") {
  SectorBasis basis(4, 2, 2);
  RngStream rng(11);
  SectorBasis tmp(2, 1, 1);
  auto h = random_instance(4, 2, 2, rng, basis);
  auto psi0 = random_state(basis.size(), rng);
  auto traj = evolve_unitary(h, psi0, {0.0});
  for (std::size_t i = 0; i < psi0.size(); ++i) CHECK(traj.states[0][i] == psi0[i]);
}

TEST_CASE("two-level Rabi oscillation") {
  // One boson on two sites with hopping J: P(site 2) = sin^2(J t).
  const double j = 1.0;
  SectorBasis basis(2, 1, 1);
  auto spec = ModelSpec::uniform(2, 1, j, 0.0, 0.0, 0.0);
  auto h = build_hamiltonian(spec, DisorderRealization{0.0, {0.0, 0.0}, 0}, basis);
  StateVector psi0 = fock_state(basis, {1, 0});
  const double pi = std::numbers::pi;
  auto traj = evolve_unitary(h, psi0, {pi / 4.0, pi / 2.0});
  // site 2 occupied is configuration (0,1), ordinal 0
  CHECK(std::norm(traj.states[0][0]) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::norm(traj.states[1][0]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("matches dense eigendecomposition at Jt = 10") {
  RngStream rng(20260810);
  SectorBasis basis(2, 1, 1);
  for (int rep = 0; rep < 5; ++rep) {
    auto h = random_instance(4, 2, 2, rng, basis);
    auto psi0 = random_state(basis.size(), rng);
    auto traj = evolve_unitary(h, psi0, {10.0});
    auto oracle = dense_evolve(h, psi0, 10.0);
    CHECK(l2_distance(traj.states[0], oracle) < 1e-8);
  }
}

TEST_CASE("norm and energy drift over Jt = 12") {
  RngStream rng(5);
  SectorBasis basis(2, 1, 1);
  auto h = random_instance(6, 3, 3, rng, basis);
  auto psi0 = random_state(basis.size(), rng);

  auto energy = [&](const StateVector& psi) {
    StateVector hpsi(psi.size());
    h.apply(psi.data(), hpsi.data());
    double e = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
      e += (std::conj(psi[i]) * hpsi[i]).real();
    return e;
  };
  const double e0 = energy(psi0);
  auto traj = evolve_unitary(h, psi0, {3.0, 6.0, 9.0, 12.0});
  for (const auto& psi : traj.states) {
    CHECK(std::abs(state_norm(psi) - 1.0) <= 1e-10);
    CHECK(std::abs(energy(psi) - e0) <= 1e-8 * std::max(1.0, std::abs(e0)));
  }
}

TEST_CASE("time composition") {
  RngStream rng(77);
  SectorBasis basis(2, 1, 1);
  auto h = random_instance(5, 2, 2, rng, basis);
  auto psi0 = random_state(basis.size(), rng);
  const double t1 = 1.3, t2 = 2.9;
  auto direct = evolve_unitary(h, psi0, {t1 + t2});
  auto first = evolve_unitary(h, psi0, {t1});
  auto second = evolve_unitary(h, first.states[0], {t2});
  CHECK(l2_distance(direct.states[0], second.states[0]) < 1e-8);
}

TEST_CASE("block propagation agrees with per-state propagation") {
  RngStream rng(99);
  SectorBasis basis(2, 1, 1);
  auto h = random_instance(5, 2, 2, rng, basis);
  const int k = 3;
  std::vector<StateVector> states;
  for (int s = 0; s < k; ++s) states.push_back(random_state(basis.size(), rng));

  std::vector<Amplitude> block(basis.size() * k);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (int s = 0; s < k; ++s) block[i * k + s] = states[static_cast<std::size_t>(s)][i];
  BlockLanczosPropagator prop(h, k);
  prop.advance(block.data(), 7.7);

  for (int s = 0; s < k; ++s) {
    auto single = evolve_unitary(h, states[static_cast<std::size_t>(s)], {7.7});
    double err = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      err += std::norm(block[i * k + s] - single.states[0][i]);
    CHECK(std::sqrt(err) < 1e-9);
  }
}

TEST_CASE("truncation leakage of Fock states") {
  SectorBasis basis(4, 3, 3);
  auto below = fock_state(basis, {1, 1, 1, 0});
  for (int l = 0; l < 4; ++l) CHECK(truncation_leakage(below, basis, l) == 0.0);
  auto capped = fock_state(basis, {3, 0, 0, 0});
  CHECK(truncation_leakage(capped, basis, 0) == doctest::Approx(4.0));
  CHECK(truncation_leakage(capped, basis, 1) == 0.0);
}

TEST_CASE("input validation") {
  SectorBasis basis(4, 2, 2);
  auto spec = ModelSpec::uniform(4, 2);
  auto h = build_hamiltonian(spec, sample_disorder(1.0, 4, 3), basis);
  StateVector bad(basis.size(), Amplitude(1.0));  // unnormalized
  CHECK_THROWS_AS(evolve_unitary(h, bad, {1.0}), ParameterError);
  StateVector wrong(basis.size() + 1, Amplitude(0.0));
  CHECK_THROWS_AS(evolve_unitary(h, wrong, {1.0}), ParameterError);
  auto psi = fock_state(basis, {1, 1, 0, 0});
  CHECK_THROWS_AS(evolve_unitary(h, psi, {2.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(evolve_unitary(h, psi, {-1.0}), ParameterError);
}
