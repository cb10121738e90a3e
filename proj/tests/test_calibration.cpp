// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quenchlab/calibration.hpp"
#include "quenchlab/errors.hpp"
#include "quenchlab/observables.hpp"
#include "quenchlab/propagator.hpp"
#include "quenchlab/rng.hpp"

using namespace quenchlab;

namespace {

ModelSpec chain_spec(int sites) { return ModelSpec::uniform(sites, 1, 1.0, 1.2 / 11.5, 0.0); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("rosenbrock minimum via nelder-mead") {
  auto rosenbrock = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions opt;
  opt.initial_spread = 0.5;
  opt.diameter_tol = 1e-9;
  opt.max_iterations = 5000;
  auto r = nelder_mead(rosenbrock, {-1.2, 1.0}, opt);
  CHECK(r.converged);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-5);
  CHECK(std::abs(r.x[1] - 1.0) < 1e-5);
}

TEST_CASE("mirror symmetry of the two staircase cases on a uniform chain") {
  const int n = 6;
  auto spec = chain_spec(n);
  std::vector<double> zero(n, 0.0);
  auto traces = simulate_staircase(spec, zero, {});
  for (int e = 0; e < n; ++e)
    for (std::size_t t = 0; t < traces.times.size(); ++t)
      for (int s = 0; s < n; ++s)
        CHECK(traces.at(1, e, static_cast<int>(t), s) ==
              doctest::Approx(traces.at(0, n - 1 - e, static_cast<int>(t), n - 1 - s))
                  .epsilon(1e-10));
}

TEST_CASE("flat two-site staircase reproduces the Rabi formula") {
  auto spec = ModelSpec::uniform(2, 1, 1.0, 0.0, 0.0);
  StaircasePlan plan;
  plan.step = 0.0;
  plan.time_points = 16;
  plan.t_max = std::numbers::pi;
  std::vector<double> zero(2, 0.0);
  auto traces = simulate_staircase(spec, zero, plan);
  for (std::size_t t = 0; t < traces.times.size(); ++t) {
    const double jt = traces.times[t];
    CHECK(traces.at(0, 0, static_cast<int>(t), 1) ==
          doctest::Approx(std::sin(jt) * std::sin(jt)).epsilon(1e-10));
  }
}

TEST_CASE("staircase simulator agrees with the generic sector propagator") {
  const int n = 6;
  auto spec = chain_spec(n);
  RngStream rng(17);
  std::vector<double> offsets(n);
  for (auto& o : offsets) o = rng.uniform(-1.0, 1.0);
  StaircasePlan plan;
  plan.time_points = 10;
  auto traces = simulate_staircase(spec, offsets, plan);

  // Re-derive case 0, excited site 2 with the sector machinery: diagonal =
  // staircase + offsets enters as a disorder vector.
  SectorBasis basis(n, 1, 1);
  DisorderRealization dis;
  dis.strength = 0.0;
  dis.offsets.resize(n);
  for (int l = 0; l < n; ++l)
    dis.offsets[static_cast<std::size_t>(l)] =
        plan.step * (l - 0.5 * (n - 1)) + offsets[static_cast<std::size_t>(l)];
  auto h = build_hamiltonian(spec, dis, basis);
  Configuration excited(static_cast<std::size_t>(n), 0);
  excited[2] = 1;
  auto traj = evolve_unitary(h, fock_state(basis, excited), traces.times);
  for (std::size_t t = 0; t < traces.times.size(); ++t) {
    auto pop = site_populations(traj.states[t], basis);
    for (int s = 0; s < n; ++s)
      CHECK(traces.at(0, 2, static_cast<int>(t), s) ==
            doctest::Approx(pop[static_cast<std::size_t>(s)]).epsilon(1e-9));
  }
}

TEST_CASE("cost vanishes at the truth and for zero-offset observations at zero") {
  const int n = 5;
  auto spec = chain_spec(n);
  std::vector<double> zero(n, 0.0);
  auto observed = simulate_staircase(spec, zero, {});
  CHECK(staircase_cost(observed, spec, {}, zero) <= 1e-12);

  auto est = fit_offsets(observed, spec, {});
  CHECK(est.cost <= 1e-12);
  for (double v : est.offsets) CHECK(std::abs(v) < 1e-3);

  RngStream rng(23);
  std::vector<double> truth(n);
  for (auto& v : truth) v = rng.uniform(-1.0, 1.0);
  auto obs2 = simulate_staircase(spec, truth, {});
  CHECK(staircase_cost(obs2, spec, {}, truth) <= 1e-12);
  std::vector<double> shifted = truth;
  for (auto& v : shifted) v += 0.37;  // global shift is unobservable
  CHECK(staircase_cost(obs2, spec, {}, shifted) <= 1e-10);
}

TEST_CASE("noiseless recovery of injected offsets, gauge-fixed") {
  const int n = 6;
  auto spec = chain_spec(n);
  RngStream rng(4);
  const DeviceUnits units;
  std::vector<double> truth(n);
  for (auto& v : truth) v = units.energy_from_mhz(rng.uniform(-15.4, 15.4));
  auto observed = simulate_staircase(spec, truth, {});
  auto est = fit_offsets(observed, spec, {});

  double mean = 0.0;
  for (double v : truth) mean += v;
  mean /= n;
  std::vector<double> centered = truth;
  for (auto& v : centered) v -= mean;
  const double err_mhz = units.mhz_from_energy(max_abs_diff(est.offsets, centered));
  CHECK(err_mhz < 0.5);
}

TEST_CASE("noisy traces degrade the fit roughly linearly") {
  const int n = 4;
  auto spec = chain_spec(n);
  RngStream rng(12);
  std::vector<double> truth(n);
  for (auto& v : truth) v = rng.uniform(-0.5, 0.5);
  double mean = 0.0;
  for (double v : truth) mean += v;
  mean /= n;
  std::vector<double> centered = truth;
  for (auto& v : centered) v -= mean;

  auto fit_with_noise = [&](double sigma, std::uint64_t seed) {
    auto observed = simulate_staircase(spec, truth, {});
    RngStream noise(seed);
    for (auto& v : observed.data) v += sigma * noise.normal();
    auto est = fit_offsets(observed, spec, {});
    return max_abs_diff(est.offsets, centered);
  };
  const double err_lo = fit_with_noise(1e-4, 100);
  const double err_hi = fit_with_noise(1e-2, 100);
  CHECK(err_hi > err_lo);
  CHECK(err_hi < 120.0 * std::max(err_lo, 1e-5));  // ~linear, generous bracket
}

TEST_CASE("iterated rounds shrink the residual monotonically") {
  const int n = 6;
  auto spec = chain_spec(n);
  const DeviceUnits units;
  RngStream rng(8);
  std::vector<double> residual(n);
  for (auto& v : residual) v = units.energy_from_mhz(rng.uniform(-15.4, 15.4));
  double mean = 0.0;
  for (double v : residual) mean += v;
  for (auto& v : residual) v -= mean / n;

  NelderMeadOptions rough = default_fit_options();
  rough.max_iterations = 120;  // deliberately under-converged per round
  rough.diameter_tol = 1e-7;

  std::vector<double> max_residuals;
  for (int round = 0; round < 3; ++round) {
    double worst = 0.0;
    for (double v : residual) worst = std::max(worst, std::abs(v));
    max_residuals.push_back(worst);
    auto observed = simulate_staircase(spec, residual, {});
    auto est = fit_offsets(observed, spec, {}, rough);
    for (int l = 0; l < n; ++l)
      residual[static_cast<std::size_t>(l)] -= est.offsets[static_cast<std::size_t>(l)];
  }
  CHECK(max_residuals[1] < max_residuals[0]);
  CHECK(max_residuals[2] < max_residuals[1]);
}
