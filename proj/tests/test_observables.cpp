// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "quenchlab/errors.hpp"
#include "quenchlab/observables.hpp"
#include "quenchlab/propagator.hpp"
#include "quenchlab/rng.hpp"

using namespace quenchlab;

namespace {

StateVector random_state(const SectorBasis& basis, RngStream& rng) {
  StateVector psi(basis.size());
  for (auto& a : psi) a = {rng.normal(), rng.normal()};
  const double n = state_norm(psi);
  for (auto& a : psi) a /= n;
  return psi;
}

ShotTable sample_table(const StateVector& psi, const SectorBasis& basis, int n,
                       RngStream& rng) {
  ShotTable t;
  t.sites = basis.sites();
  for (int i = 0; i < n; ++i) {
    double pick = rng.uniform();
    std::size_t idx = basis.size() - 1;
    for (std::size_t c = 0; c < basis.size(); ++c) {
      pick -= std::norm(psi[c]);
      if (pick <= 0.0) {
        idx = c;
        break;
      }
    }
    t.append(basis.state(idx));
  }
  return t;
}

}  // namespace

TEST_CASE("populations of Fock and superposition states") {
  SectorBasis basis(4, 2, 2);
  auto fock = fock_state(basis, {0, 1, 1, 0});
  auto pop = site_populations(fock, basis);
  CHECK(pop[0] == 0.0);
  CHECK(pop[1] == 1.0);
  CHECK(pop[2] == 1.0);
  CHECK(pop[3] == 0.0);

  SectorBasis two(2, 1, 1);
  StateVector super(two.size());
  super[*two.state_index(Configuration{0, 1})] = 1.0 / std::sqrt(2.0);
  super[*two.state_index(Configuration{1, 0})] = 1.0 / std::sqrt(2.0);
  auto p2 = site_populations(super, two);
  CHECK(p2[0] == doctest::Approx(0.5));
  CHECK(p2[1] == doctest::Approx(0.5));
}

TEST_CASE("shot-mode populations converge to exact at the binomial rate") {
  SectorBasis basis(4, 2, 3);
  RngStream rng(123);
  auto psi = random_state(basis, rng);
  auto exact = site_populations(psi, basis);
  const int n = 100000;
  auto shots = sample_table(psi, basis, n, rng);
  auto est = site_populations(shots);
  for (int l = 0; l < 4; ++l) {
    // occupations reach 2 here, so bound the scale by the worst binomial width
    const double se = std::sqrt(2.0 / n);
    CHECK(std::abs(est[static_cast<std::size_t>(l)] -
                   exact[static_cast<std::size_t>(l)]) < 4.0 * se);
  }
}

TEST_CASE("autocorrelation identities") {
  std::vector<double> frozen{1, 0, 1, 0, 1, 0};
  CHECK(autocorrelation(frozen, frozen) == doctest::Approx(1.0));
  std::vector<double> thermal(6, 0.5);
  CHECK(autocorrelation(thermal, frozen) == doctest::Approx(0.0));
  std::vector<double> p0{1, 0}, pt{0.75, 0.25};
  CHECK(autocorrelation(pt, p0) == doctest::Approx(0.5));
  CHECK(autocorrelation(p0, pt) == doctest::Approx(0.5));  // symmetric
  CHECK_THROWS_AS(autocorrelation(p0, frozen), ParameterError);
}

TEST_CASE("block number distribution against brute-force marginalization") {
  SectorBasis basis(6, 3, 3);
  RngStream rng(321);
  auto psi = random_state(basis, rng);
  const int m = 3;
  auto dist = block_number_distribution(psi, basis, m);
  std::vector<double> brute(static_cast<std::size_t>(basis.total()) + 1, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int n = 0;
    for (int l = 0; l < m; ++l) n += basis.state(i)[static_cast<std::size_t>(l)];
    brute[static_cast<std::size_t>(n)] += std::norm(psi[i]);
  }
  REQUIRE(dist.p.size() == brute.size());
  double total = 0.0;
  for (std::size_t n = 0; n < brute.size(); ++n) {
    CHECK(dist.p[n] == doctest::Approx(brute[n]).epsilon(1e-12));
    total += dist.p[n];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("complement blocks mirror each other") {
  SectorBasis basis(6, 3, 2);
  RngStream rng(55);
  auto psi = random_state(basis, rng);
  for (int m = 1; m < 6; ++m) {
    auto left = block_number_distribution(psi, basis, m);
    // complement marginal computed by brute force over the trailing block
    std::vector<double> right(static_cast<std::size_t>(basis.total()) + 1, 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      int n = 0;
      for (int l = m; l < 6; ++l) n += basis.state(i)[static_cast<std::size_t>(l)];
      right[static_cast<std::size_t>(n)] += std::norm(psi[i]);
    }
    for (int n = 0; n <= basis.total(); ++n)
      CHECK(left.p[static_cast<std::size_t>(n)] ==
            doctest::Approx(right[static_cast<std::size_t>(basis.total() - n)])
                .epsilon(1e-12));
  }
}

TEST_CASE("number entropy of simple distributions") {
  CHECK(number_entropy({1, {0.0, 1.0, 0.0}}) == 0.0);
  CHECK(number_entropy({1, {0.5, 0.5}}) == doctest::Approx(std::log(2.0)));
  CHECK(number_entropy({2, {1.0 / 3, 1.0 / 3, 1.0 / 3}}) ==
        doctest::Approx(std::log(3.0)));
  // invariant under bin relabeling
  CHECK(number_entropy({1, {0.2, 0.8}}) == doctest::Approx(number_entropy({1, {0.8, 0.2}})));
}

TEST_CASE("entropy bound for block distributions") {
  SectorBasis basis(6, 3, 1);
  RngStream rng(99);
  for (int rep = 0; rep < 5; ++rep) {
    auto psi = random_state(basis, rng);
    for (int m = 1; m <= 3; ++m) {
      auto s = number_entropy(block_number_distribution(psi, basis, m));
      CHECK(s >= 0.0);
      CHECK(s <= std::log(std::min(basis.total(), m * basis.cap()) + 1.0) + 1e-12);
    }
  }
}

TEST_CASE("hamming distance identities") {
  SectorBasis basis(2, 1, 1);
  auto s0 = Configuration{0, 1};
  CHECK(hamming_distance(fock_state(basis, s0), basis, s0) == 0.0);
  CHECK(hamming_distance(fock_state(basis, {1, 0}), basis, s0) == doctest::Approx(1.0));
}

TEST_CASE("uniform half-filled ensemble sits at distance 1/2") {
  SectorBasis basis(12, 6, 1);
  REQUIRE(basis.size() == 924);
  StateVector uniform(basis.size(), Amplitude(1.0 / std::sqrt(924.0)));
  Configuration s0{0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0};
  CHECK(hamming_distance(uniform, basis, s0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hamming distance counts over-filled sites as flips") {
  SectorBasis basis(3, 2, 2);
  auto psi = fock_state(basis, {2, 0, 0});
  // site 1 reads 2 vs reference 1 -> flip; sites 2,3 read 0 vs 1,0
  CHECK(hamming_distance(psi, basis, {1, 1, 0}) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(hamming_distance(psi, basis, {2, 0, 0}), ParameterError);
}

TEST_CASE("shot-based observables reject empty tables") {
  ShotTable empty{4, {}, {}};
  CHECK_THROWS_AS(site_populations(empty), EstimationError);
  CHECK_THROWS_AS(hamming_distance(empty, {1, 0, 1, 0}), EstimationError);
}
