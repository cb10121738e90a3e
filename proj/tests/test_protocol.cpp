// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "quenchlab/errors.hpp"
#include "quenchlab/protocol.hpp"

using namespace quenchlab;

namespace {

RunPlan tiny_plan(int sites, std::uint64_t seed) {
  RunPlan plan;
  Configuration neel(static_cast<std::size_t>(sites), 0);
  for (int l = 0; l < sites; l += 2) neel[static_cast<std::size_t>(l)] = 1;
  Configuration block(static_cast<std::size_t>(sites), 0);
  for (int l = 0; l < sites / 2; ++l) block[static_cast<std::size_t>(l)] = 1;
  plan.initial_states = {neel, block};
  plan.disorder_grid = {1.0, 3.0, 7.0};
  plan.realizations = 2;
  plan.eq_times = RunPlan::equilibrium_window();
  plan.master_seed = seed;
  return plan;
}

}  // namespace

TEST_CASE("paper defaults carry the published sweep shape") {
  auto plan = RunPlan::paper_defaults(1);
  plan.validate(12);
  CHECK(plan.initial_states.size() == 10);
  CHECK(plan.disorder_grid.size() == 13);
  CHECK(plan.disorder_grid.front() == 1.0);
  CHECK(plan.disorder_grid.back() == 7.0);
  CHECK(plan.realizations == 60);
  REQUIRE(plan.eq_times.size() == 5);
  CHECK(plan.eq_times.front() == doctest::Approx(7.9));
  CHECK(plan.eq_times.back() == doctest::Approx(10.8));
  CHECK(plan.eq_times[1] == doctest::Approx(8.625));
  CHECK(plan.filling_total(12) == 6);
}

TEST_CASE("plan validation rejects broken inputs") {
  auto plan = tiny_plan(4, 0);
  plan.initial_states[0] = {1, 1, 1, 0};  // wrong filling
  CHECK_THROWS_AS(plan.validate(4), ParameterError);
  plan = tiny_plan(4, 0);
  plan.eq_times = {5.0, 9.0};  // below the equilibrated window
  CHECK_THROWS_AS(plan.validate(4), ParameterError);
  plan = tiny_plan(4, 0);
  plan.eq_times = {9.0, 9.0};
  CHECK_THROWS_AS(plan.validate(4), ParameterError);
}

TEST_CASE("point-mass shots reproduce the configuration") {
  SectorBasis basis(4, 2, 2);
  auto psi = fock_state(basis, {1, 0, 1, 0});
  RngStream rng(7);
  auto shots = sample_shots(psi, basis, 50, std::nullopt, rng);
  REQUIRE(shots.n_shots() == 50);
  for (std::size_t i = 0; i < shots.n_shots(); ++i) {
    auto s = shots.shot(i);
    CHECK(s[0] == 1);
    CHECK(s[1] == 0);
    CHECK(s[2] == 1);
    CHECK(s[3] == 0);
  }
}

TEST_CASE("perfect f00 keeps empty sites dark regardless of f11") {
  SectorBasis basis(4, 0, 2);  // vacuum sector
  StateVector psi(basis.size(), Amplitude(0.0));
  psi[0] = 1.0;
  RngStream rng(9);
  auto readout = ReadoutModel::uniform(4, 1.0, 0.5);
  auto shots = sample_shots(psi, basis, 200, readout, rng);
  for (std::size_t i = 0; i < shots.n_shots(); ++i)
    for (auto v : shots.shot(i)) CHECK(v == 0);
}

TEST_CASE("sampled distribution passes a chi-square check against |psi|^2") {
  SectorBasis basis(4, 2, 3);
  RngStream seed_rng(20260810);
  StateVector psi(basis.size());
  for (auto& a : psi) a = {seed_rng.normal(), seed_rng.normal()};
  const double n = state_norm(psi);
  for (auto& a : psi) a /= n;

  RngStream rng(31);
  const int n_shots = 100000;
  auto shots = sample_shots(psi, basis, n_shots, std::nullopt, rng);
  std::vector<double> counts(basis.size(), 0.0);
  for (std::size_t i = 0; i < shots.n_shots(); ++i) {
    auto idx = basis.state_index(shots.shot(i));
    REQUIRE(idx.has_value());
    counts[*idx] += 1.0;
  }
  double chi2 = 0.0;
  int dof = 0;
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const double expected = std::norm(psi[c]) * n_shots;
    if (expected < 5.0) continue;  // standard chi-square validity cut
    chi2 += (counts[c] - expected) * (counts[c] - expected) / expected;
    ++dof;
  }
  // 99% quantile of chi2 with ~dof dof, Wilson-Hilferty approximation.
  const double z = 2.326;
  const double q99 =
      dof * std::pow(1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof)), 3);
  CHECK(chi2 < q99);
}

TEST_CASE("post-selection keeps exactly the right-filling shots") {
  ShotTable t;
  t.sites = 2;
  t.append(Configuration{1, 0});
  t.append(Configuration{1, 1});
  t.append(Configuration{0, 0});
  double retention = -1.0;
  auto kept = post_select(t, 1, &retention);
  REQUIRE(kept.n_shots() == 1);
  CHECK(kept.shot(0)[0] == 1);
  CHECK(retention == doctest::Approx(1.0 / 3.0));

  auto none = post_select(t, 2, &retention);
  CHECK(none.n_shots() == 1);  // the (1,1) shot
  auto empty = post_select(ShotTable{2, {}, {}}, 1, &retention);
  CHECK(empty.n_shots() == 0);
  CHECK(retention == 0.0);
}

TEST_CASE("readout-corrupted retention matches the flip-pattern enumeration") {
  // Half-filled 6-site Fock state, uniform (f00, f11): retention is the
  // probability that flips preserve the total, from the binomial convolution
  // sum_k C(3,k)^2 e1^k (1-e1)^{3-k} e0^k (1-e0)^{3-k}.
  const double f00 = 0.95, f11 = 0.95;
  const double e0 = 1.0 - f00, e1 = 1.0 - f11;
  double expected = 0.0;
  const double c3[] = {1, 3, 3, 1};
  for (int k = 0; k <= 3; ++k)
    expected += c3[k] * c3[k] * std::pow(e1, k) * std::pow(1 - e1, 3 - k) *
                std::pow(e0, k) * std::pow(1 - e0, 3 - k);

  SectorBasis basis(6, 3, 1);
  auto psi = fock_state(basis, {1, 1, 1, 0, 0, 0});
  RngStream rng(17);
  auto readout = ReadoutModel::uniform(6, f00, f11);
  const int n = 200000;
  auto shots = sample_shots(psi, basis, n, readout, rng);
  double retention = 0.0;
  post_select(shots, 3, &retention);
  const double se = std::sqrt(expected * (1 - expected) / n);
  CHECK(std::abs(retention - expected) < 3.0 * se);
}

TEST_CASE("quench record at h = 0 with t = 0 included") {
  auto spec = ModelSpec::uniform(4, 3);
  auto plan = tiny_plan(4, 5);
  plan.disorder_grid = {0.0};
  auto rec = run_quench(spec, std::nullopt, plan, 0, 0, 0, {0.0});
  REQUIRE(rec.times.front() == 0.0);
  CHECK_FALSE(rec.is_eq_time.front());
  CHECK(rec.autocorrelation_t[0] == doctest::Approx(1.0));
  CHECK(rec.hamming_t[0] == doctest::Approx(0.0));
  CHECK(rec.number_entropy_t[0] == doctest::Approx(0.0));
  // Q_eq is the plain average of the five equilibrium points.
  double c = 0.0;
  for (std::size_t i = 0; i < rec.times.size(); ++i)
    if (rec.is_eq_time[i]) c += rec.autocorrelation_t[i];
  CHECK(rec.q_eq(Quantity::kAutoCorrelation) == doctest::Approx(c / 5.0));
}

TEST_CASE("exact and high-statistics shot modes agree") {
  auto spec = ModelSpec::uniform(6, 3);
  RunPlan plan;
  plan.initial_states = {{1, 0, 1, 0, 1, 0}};
  plan.disorder_grid = {2.0};
  plan.realizations = 1;
  plan.eq_times = RunPlan::equilibrium_window();
  plan.master_seed = 77;
  auto exact = run_quench(spec, std::nullopt, plan, 0, 0, 0);
  plan.mode = RunMode::kShots;
  plan.shots = 200000;
  auto shot = run_quench(spec, std::nullopt, plan, 0, 0, 0);
  CHECK(shot.retention == doctest::Approx(1.0));  // no noise, no readout error
  const double se = 1.0 / std::sqrt(static_cast<double>(plan.shots));
  for (Quantity q : kAllQuantities) {
    CAPTURE(quantity_letter(q));
    CHECK(std::abs(exact.q_eq(q) - shot.q_eq(q)) < 4.0 * se);
  }
}

TEST_CASE("closed-system observables are independent of omega") {
  auto spec = ModelSpec::uniform(6, 2);
  auto plan = tiny_plan(6, 3);
  auto rec0 = run_quench(spec, std::nullopt, plan, 0, 1, 1);
  spec.omega = 2.5;
  auto rec1 = run_quench(spec, std::nullopt, plan, 0, 1, 1);
  for (Quantity q : kAllQuantities)
    CHECK(rec0.q_eq(q) == doctest::Approx(rec1.q_eq(q)).epsilon(1e-9));
}

TEST_CASE("sweep table is deterministic across worker counts") {
  auto spec = ModelSpec::uniform(4, 2);
  auto plan = tiny_plan(4, 99);
  SweepSettings one;
  one.jobs = 1;
  SweepSettings four;
  four.jobs = 4;
  auto a = run_sweep(spec, std::nullopt, plan, one);
  auto b = run_sweep(spec, std::nullopt, plan, four);
  REQUIRE(a.failures.empty());
  REQUIRE(b.failures.empty());
  for (Quantity q : kAllQuantities)
    for (int s = 0; s < 2; ++s)
      for (int r = 0; r < 2; ++r)
        for (int h = 0; h < 3; ++h) {
          const auto& ca = a.table.cell(q, s, r, h);
          const auto& cb = b.table.cell(q, s, r, h);
          REQUIRE(ca.valid);
          REQUIRE(cb.valid);
          CHECK(ca.q_eq == cb.q_eq);  // bit-identical
        }
}

TEST_CASE("sweep cells match stand-alone quench runs") {
  auto spec = ModelSpec::uniform(4, 2);
  auto plan = tiny_plan(4, 123);
  auto sweep = run_sweep(spec, std::nullopt, plan, {});
  auto rec = run_quench(spec, std::nullopt, plan, 1, 0, 2);
  for (Quantity q : kAllQuantities) {
    const auto& cell = sweep.table.cell(q, 1, 0, 2);
    // same disorder stream, different Krylov block schedule: equal to solver
    // accuracy rather than bitwise
    CHECK(std::abs(cell.q_eq - rec.q_eq(q)) < 1e-8);
    CHECK(cell.seed == rec.disorder_seed);
  }
}

TEST_CASE("ensemble table round-trips through CSV") {
  auto spec = ModelSpec::uniform(4, 2);
  auto plan = tiny_plan(4, 2024);
  auto sweep = run_sweep(spec, std::nullopt, plan, {});
  sweep.table.config_hash = "deadbeef";
  const auto path = std::filesystem::temp_directory_path() / "quenchlab_table_test.csv";
  sweep.table.write_csv(path);
  auto loaded = EnsembleTable::read_csv(path);
  CHECK(loaded.config_hash == "deadbeef");
  CHECK(loaded.master_seed == 2024);
  CHECK(loaded.sites == 4);
  CHECK(loaded.n_states() == 2);
  CHECK(loaded.n_realizations() == 2);
  REQUIRE(loaded.h_grid() == sweep.table.h_grid());
  REQUIRE(loaded.eq_times.size() == 5);
  for (Quantity q : kAllQuantities)
    for (int s = 0; s < 2; ++s)
      for (int r = 0; r < 2; ++r)
        for (int h = 0; h < 3; ++h) {
          const auto& ca = sweep.table.cell(q, s, r, h);
          const auto& cb = loaded.cell(q, s, r, h);
          CHECK(ca.q_eq == cb.q_eq);  // %.17g round-trip is exact
          REQUIRE(ca.per_time.size() == cb.per_time.size());
          for (std::size_t i = 0; i < ca.per_time.size(); ++i)
            CHECK(ca.per_time[i] == cb.per_time[i]);
        }
  std::filesystem::remove(path);
}

TEST_CASE("open-system quench matches closed dynamics when noise is zero") {
  auto spec = ModelSpec::uniform(4, 3);
  auto plan = tiny_plan(4, 11);
  auto closed = run_quench(spec, std::nullopt, plan, 0, 0, 1);
  auto noise = NoiseSpec::uniform(4, 0.0, 0.0);
  auto open = run_quench(spec, noise, plan, 0, 0, 1);
  for (Quantity q : kAllQuantities)
    CHECK(std::abs(closed.q_eq(q) - open.q_eq(q)) < 1e-7);
}
