// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "quenchlab/errors.hpp"
#include "quenchlab/inference.hpp"

using namespace quenchlab;

namespace {

// Short schedule for unit tests; the full published schedule runs in the
// acceptance suite.
GibbsSchedule quick_schedule() {
  GibbsSchedule s;
  s.chains = 3;
  s.iterations = 60000;
  s.burn_in = 20000;
  s.thin = 4;
  return s;
}

// Reference transition-point observations (simulation and experiment columns).
std::vector<std::vector<double>> reference_peaks_simulation() {
  return {{3.5, 3.5, 2.5, 4.0, 4.5, 2.0, 3.5, 3.0, 4.0, 4.0},
          {2.0, 2.0, 2.5, 4.5, 2.5, 2.0, 3.0, 2.0, 2.5, 5.0},
          {4.0, 2.0, 3.0, 5.0, 5.0, 2.0, 3.0, 6.5, 4.0, 2.5}};
}

}  // namespace

TEST_CASE("degenerate data concentrates the posterior at the value") {
  std::vector<std::vector<double>> y(3, std::vector<double>(10, 3.0));
  auto samples = gibbs_run(y, quick_schedule(), {}, 42);
  auto report = summarize(samples);
  CHECK(std::abs(report.mu.mode - 3.0) < 0.05);
  CHECK(std::abs(report.mu.mean - 3.0) < 0.05);
}

TEST_CASE("retained-draw bookkeeping follows the schedule") {
  GibbsSchedule s;
  s.chains = 2;
  s.iterations = 1000;
  s.burn_in = 800;
  s.thin = 10;
  auto samples = gibbs_run({{1.0, 2.0}, {2.0, 3.0}}, s, {}, 1);
  CHECK(samples.retained_per_chain() == 20);  // (1000 - 800) / 10
  REQUIRE(samples.theta.size() == 2);
  CHECK(samples.theta[0].size() == 2);
  CHECK(samples.theta[0][0].size() == 20);
}

TEST_CASE("posterior mode lands near the paper peak tables") {
  auto samples = gibbs_run(reference_peaks_simulation(), quick_schedule(), {}, 7, 2);
  auto report = summarize(samples);
  CHECK(report.mu.mode == doctest::Approx(3.3).epsilon(0.12));
  for (const auto& [name, r] : report.rhat) {
    CAPTURE(name);
    CHECK(r < 1.05);  // short chains; the full schedule gates at 1.01
  }
}

TEST_CASE("conjugate oracle: one group with frozen variances") {
  // With delta, tau known and one group, mu | Y ~ N(ybar, tau^2 + delta^2/n).
  const double delta = 0.6, tau = 0.8;
  std::vector<double> group{2.1, 2.9, 3.4, 2.5, 3.0, 2.8, 3.3, 2.6};
  double ybar = 0.0;
  for (double v : group) ybar += v;
  ybar /= static_cast<double>(group.size());
  GibbsOptions opt;
  opt.freeze_delta = delta;
  opt.freeze_tau = tau;
  auto samples = gibbs_run({group}, quick_schedule(), opt, 11, 2);
  auto report = summarize(samples);
  const double expected_sd =
      std::sqrt(tau * tau + delta * delta / static_cast<double>(group.size()));
  const long n_draws = samples.retained_per_chain() * 3;
  // Autocorrelation inflates the effective MC error; use a wide factor.
  const double mcse = 10.0 * expected_sd / std::sqrt(static_cast<double>(n_draws));
  CHECK(std::abs(report.mu.mean - ybar) < std::max(mcse, 0.02));
  CHECK(report.mu.sd == doctest::Approx(expected_sd).epsilon(0.08));
}

TEST_CASE("shift equivariance of the mu posterior") {
  auto y = reference_peaks_simulation();
  auto base = summarize(gibbs_run(y, quick_schedule(), {}, 21, 2));
  const double shift = 2.5;
  for (auto& g : y)
    for (auto& v : g) v += shift;
  auto moved = summarize(gibbs_run(y, quick_schedule(), {}, 21, 2));
  CHECK(moved.mu.mean == doctest::Approx(base.mu.mean + shift).epsilon(0.02));
  CHECK(moved.tau.mean == doctest::Approx(base.tau.mean).epsilon(0.15));
}

TEST_CASE("exchangeability: permuting groups leaves mu alone") {
  auto y = reference_peaks_simulation();
  auto base = summarize(gibbs_run(y, quick_schedule(), {}, 31, 2));
  std::vector<std::vector<double>> permuted{y[2], y[0], y[1]};
  auto moved = summarize(gibbs_run(permuted, quick_schedule(), {}, 31, 2));
  CHECK(moved.mu.mean == doctest::Approx(base.mu.mean).epsilon(0.03));
  CHECK(moved.mu.sd == doctest::Approx(base.mu.sd).epsilon(0.25));
}

TEST_CASE("diagnostic separates mixed chains from divergent ones") {
  auto samples = gibbs_run(reference_peaks_simulation(), quick_schedule(), {}, 3, 2);
  for (const auto& [name, r] : convergence_diagnostic(samples)) CHECK(r < 1.1);

  // Deliberately divergent chains.
  PosteriorSamples fake;
  fake.n_groups = 0;
  fake.mu = {std::vector<double>(500, 0.0), std::vector<double>(500, 10.0)};
  fake.tau = fake.mu;
  fake.delta = fake.mu;
  fake.theta = {{}, {}};
  for (auto& c : fake.mu)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += 1e-3 * static_cast<double>(i % 7);
  auto rhat = convergence_diagnostic(fake);
  CHECK(rhat["mu"] > 1.1);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(gibbs_run({}, quick_schedule()), ParameterError);
  CHECK_THROWS_AS(gibbs_run({{1.0, std::nan("")}}, quick_schedule()), ParameterError);
  GibbsSchedule bad;
  bad.burn_in = bad.iterations + 1;
  CHECK_THROWS_AS(gibbs_run({{1.0}}, bad), ParameterError);
  PosteriorSamples single;
  single.mu = {std::vector<double>(10, 1.0)};
  CHECK_THROWS_AS(convergence_diagnostic(single), ParameterError);
}
