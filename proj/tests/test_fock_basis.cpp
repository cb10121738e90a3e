// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>
#include <tuple>
#include <vector>

#include "quenchlab/errors.hpp"
#include "quenchlab/fock_basis.hpp"

using namespace quenchlab;

namespace {

// Independent brute-force oracle: walk all (cap+1)^sites occupation vectors.
std::vector<Configuration> brute_force_sector(int sites, int total, int cap) {
  std::vector<Configuration> out;
  Configuration c(static_cast<std::size_t>(sites), 0);
  for (;;) {
    int sum = 0;
    for (auto v : c) sum += v;
    if (sum == total) out.push_back(c);
    int l = sites - 1;
    while (l >= 0 && c[static_cast<std::size_t>(l)] == cap) {
      c[static_cast<std::size_t>(l)] = 0;
      --l;
    }
    if (l < 0) break;
    c[static_cast<std::size_t>(l)] += 1;
  }
  return out;  // odometer order == ascending lexicographic
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / (i + 1);
  return r;
}

}  // namespace

TEST_CASE("two placements of one hard-core boson") {
  SectorBasis b(2, 1, 1);
  REQUIRE(b.size() == 2);
  CHECK(b.state(0)[0] == 0);
  CHECK(b.state(0)[1] == 1);
  CHECK(b.state(1)[0] == 1);
  CHECK(b.state(1)[1] == 0);
  CHECK(b.state_index(Configuration{1, 0}) == 1);
  CHECK(b.state_index(Configuration{0, 1}) == 0);
  CHECK_FALSE(b.state_index(Configuration{1, 1}).has_value());
  CHECK_FALSE(b.state_index(Configuration{0, 0}).has_value());
  CHECK_FALSE(b.state_index(Configuration{1}).has_value());
}

TEST_CASE("dimensions of the production sectors") {
  CHECK(SectorBasis::dimension(12, 6, 1) == 924);   // C(12,6)
  CHECK(SectorBasis::dimension(12, 6, 3) == 11440);
  CHECK(SectorBasis(12, 6, 3).size() == 11440);
}

TEST_CASE("enumeration matches the brute-force oracle") {
  for (auto [sites, total, cap] :
       std::vector<std::tuple<int,int,int>>{{4, 2, 3}, {5, 3, 2}, {6, 3, 3}, {8, 4, 1}, {7, 9, 3}, {3, 0, 2}}) {
    CAPTURE(sites); CAPTURE(total); CAPTURE(cap);
    SectorBasis b(sites, total, cap);
    auto oracle = brute_force_sector(sites, total, cap);
    REQUIRE(b.size() == oracle.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      auto s = b.state(i);
      CHECK(std::equal(s.begin(), s.end(), oracle[i].begin(), oracle[i].end()));
    }
  }
}

TEST_CASE("dimension matches brute-force counting up to 10 sites") {
  for (int sites = 1; sites <= 10; sites += 3) {
    for (int cap : {1, 2, 3}) {
      for (int total = 0; total <= std::min(sites * cap, 6); total += 2) {
        CAPTURE(sites); CAPTURE(cap); CAPTURE(total);
        CHECK(SectorBasis::dimension(sites, total, cap) ==
              brute_force_sector(sites, total, cap).size());
      }
    }
  }
}

TEST_CASE("hard-core dimension is the binomial coefficient") {
  for (int n = 1; n <= 14; ++n)
    for (int k = 0; k <= n; ++k) CHECK(SectorBasis::dimension(n, k, 1) == binomial(n, k));
}

TEST_CASE("index round trip over whole sectors") {
  for (auto [sites, total, cap] : std::vector<std::tuple<int,int,int>>{{12, 6, 3}, {6, 3, 2}, {9, 4, 3}}) {
    SectorBasis b(sites, total, cap);
    for (std::size_t i = 0; i < b.size(); ++i) {
      auto idx = b.state_index(b.state(i));
      REQUIRE(idx.has_value());
      CHECK(*idx == i);
    }
  }
}

TEST_CASE("invalid bounds are rejected") {
  CHECK_THROWS_AS(SectorBasis(0, 0, 1), ParameterError);
  CHECK_THROWS_AS(SectorBasis(4, -1, 3), ParameterError);
  CHECK_THROWS_AS(SectorBasis(4, 13, 3), ParameterError);
  CHECK_THROWS_AS(SectorBasis::dimension(2, 1, -1), ParameterError);
}
