// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "quenchlab/errors.hpp"

namespace quenchlab {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& opt) {
  const std::size_t n = start.size();
  if (n == 0) throw ParameterError("nelder_mead: empty parameter vector");

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_spread;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> v2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      v2[i] = values[idx[i]];
    }
    simplex.swap(s2);
    values.swap(v2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d = std::max(d, std::abs(simplex[i][j] - simplex[0][j]));
    return d;
  };

  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    order();
    if (diameter() < opt.diameter_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

    auto blend = [&](const std::vector<double>& from, double coeff) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coeff * (centroid[j] - from[j]);
      return p;
    };

    const auto reflected = blend(simplex[n], opt.reflection);
    const double fr = f(reflected);
    if (fr < values[0]) {
      const auto expanded = blend(simplex[n], opt.reflection * opt.expansion);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[n] = expanded;
        values[n] = fe;
      } else {
        simplex[n] = reflected;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = fr;
    } else {
      const bool outside = fr < values[n];
      const auto contracted =
          outside ? blend(simplex[n], opt.reflection * opt.contraction)
                  : blend(simplex[n], -opt.contraction);
      const double fc = f(contracted);
      if (fc < std::min(fr, values[n])) {
        simplex[n] = contracted;
        values[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + opt.shrink * (simplex[i][j] - simplex[0][j]);
          values[i] = f(simplex[i]);
        }
      }
    }
  }
  order();
  NelderMeadResult result;
  result.x = simplex[0];
  result.value = values[0];
  result.iterations = it;
  result.converged = diameter() < opt.diameter_tol;
  return result;
}

namespace {

// Dense single-excitation Hamiltonian: staircase + offsets on the diagonal,
// chain couplings off it. The interaction term vanishes with one boson.
Eigen::MatrixXd single_excitation_h(const ModelSpec& spec, std::span<const double> offsets,
                                    double step_signed) {
  const int n = spec.sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l < n; ++l)
    h(l, l) = step_signed * (l - 0.5 * (n - 1)) + offsets[static_cast<std::size_t>(l)];
  for (int l = 0; l + 1 < n; ++l) h(l, l + 1) = h(l + 1, l) = spec.j1[static_cast<std::size_t>(l)];
  for (int l = 0; l + 2 < n; ++l) h(l, l + 2) = h(l + 2, l) = spec.j2[static_cast<std::size_t>(l)];
  return h;
}

}  // namespace

StaircaseTraces simulate_staircase(const ModelSpec& spec, std::span<const double> offsets,
                                   const StaircasePlan& plan) {
  spec.validate();
  if (static_cast<int>(offsets.size()) != spec.sites)
    throw ParameterError("simulate_staircase: offsets length mismatch");
  if (plan.time_points < 2 || plan.t_max <= 0.0)
    throw ParameterError("simulate_staircase: invalid time grid");

  const int n = spec.sites;
  StaircaseTraces traces;
  traces.sites = n;
  traces.times.resize(static_cast<std::size_t>(plan.time_points));
  for (int t = 0; t < plan.time_points; ++t)
    traces.times[static_cast<std::size_t>(t)] = plan.t_max * (t + 1) / plan.time_points;
  traces.data.assign(2ull * n * traces.times.size() * n, 0.0);

  for (int c = 0; c < 2; ++c) {
    const double step = c == 0 ? plan.step : -plan.step;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        single_excitation_h(spec, offsets, step));
    const auto& q = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    for (std::size_t t = 0; t < traces.times.size(); ++t) {
      // U(t) = Q e^{-i lambda t} Q^T; column e holds the amplitudes after
      // exciting site e.
      Eigen::MatrixXcd phase = Eigen::MatrixXcd::Zero(n, n);
      for (int j = 0; j < n; ++j)
        phase(j, j) = std::polar(1.0, -lam(j) * traces.times[t]);
      const Eigen::MatrixXcd ut = q * phase * q.transpose();
      for (int e = 0; e < n; ++e)
        for (int s = 0; s < n; ++s)
          traces.at(c, e, static_cast<int>(t), s) = std::norm(ut(s, e));
    }
  }
  return traces;
}

double staircase_cost(const StaircaseTraces& observed, const ModelSpec& spec,
                      const StaircasePlan& plan, std::span<const double> offsets) {
  StaircasePlan p = plan;
  p.time_points = static_cast<int>(observed.times.size());
  const auto sim = simulate_staircase(spec, offsets, p);
  if (sim.data.size() != observed.data.size())
    throw ParameterError("staircase_cost: trace shapes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < sim.data.size(); ++i) {
    const double d = sim.data[i] - observed.data[i];
    acc += d * d;
  }
  return acc;
}

NelderMeadOptions default_fit_options() {
  NelderMeadOptions opt;
  opt.initial_spread = 2.0 / 11.5;   // 2 MHz equivalent
  opt.diameter_tol = 1e-3 / 11.5;    // 1e-3 MHz equivalent
  opt.max_iterations = 5000;
  return opt;
}

OffsetEstimate fit_offsets(const StaircaseTraces& observed, const ModelSpec& spec,
                           const StaircasePlan& plan, const NelderMeadOptions& options) {
  if (observed.sites != spec.sites)
    throw ParameterError("fit_offsets: trace/spec site mismatch");
  const std::size_t n = static_cast<std::size_t>(spec.sites);

  // The uniform offset shift is a flat direction of the trace cost; a small
  // quadratic pin on the mean removes it without biasing differences.
  auto objective = [&](const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    return staircase_cost(observed, spec, plan, x) + mean * mean;
  };

  auto result = nelder_mead(objective, std::vector<double>(n, 0.0), options);
  // One restart from the incumbent tightens stragglers in higher dimensions.
  NelderMeadOptions second = options;
  second.initial_spread = std::max(options.initial_spread * 0.1, 10 * options.diameter_tol);
  auto refined = nelder_mead(objective, result.x, second);
  if (refined.value < result.value) {
    refined.iterations += result.iterations;
    result = refined;
  }

  OffsetEstimate estimate;
  estimate.offsets = result.x;
  double mean = 0.0;
  for (double v : estimate.offsets) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : estimate.offsets) v -= mean;
  estimate.cost = staircase_cost(observed, spec, plan, estimate.offsets);
  estimate.iterations = result.iterations;
  estimate.converged = result.converged;
  return estimate;
}

}  // namespace quenchlab
