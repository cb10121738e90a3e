// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/inference.hpp"

#include <algorithm>
#include <cmath>

#include "quenchlab/density.hpp"
#include "quenchlab/errors.hpp"
#include "quenchlab/rng.hpp"
#include "quenchlab/thread_pool.hpp"

namespace quenchlab {

namespace {

// Scaled inverse chi-square draw: nu * s2 / chi2_nu.
double scaled_inv_chi2(RngStream& rng, double nu, double s2) {
  const double chi2 = 2.0 * rng.gamma(0.5 * nu);
  return nu * s2 / std::max(chi2, 1e-300);
}

struct DataSummary {
  int groups = 0;
  std::vector<int> n;           // observations per group
  std::vector<double> sum;      // per-group sums
  int n_total = 0;
  double grand_mean = 0.0;
  double grand_sd = 0.0;
};

DataSummary summarize_data(const std::vector<std::vector<double>>& y) {
  DataSummary d;
  d.groups = static_cast<int>(y.size());
  if (d.groups < 1) throw ParameterError("gibbs_run: need at least one group");
  double acc = 0.0;
  for (const auto& g : y) {
    if (g.empty()) throw ParameterError("gibbs_run: empty group");
    double s = 0.0;
    for (double v : g) {
      if (!std::isfinite(v)) throw ParameterError("gibbs_run: non-finite observation");
      s += v;
    }
    d.n.push_back(static_cast<int>(g.size()));
    d.sum.push_back(s);
    d.n_total += static_cast<int>(g.size());
    acc += s;
  }
  d.grand_mean = acc / d.n_total;
  double sq = 0.0;
  for (const auto& g : y)
    for (double v : g) sq += (v - d.grand_mean) * (v - d.grand_mean);
  d.grand_sd = d.n_total > 1 ? std::sqrt(sq / (d.n_total - 1)) : 0.0;
  if (d.grand_sd == 0.0) d.grand_sd = 1e-6;  // degenerate data still needs starts
  return d;
}

void run_chain(const std::vector<std::vector<double>>& y, const DataSummary& data,
               const GibbsSchedule& sched, const GibbsOptions& opt, std::uint64_t seed,
               std::vector<double>& mu_out, std::vector<double>& tau_out,
               std::vector<double>& delta_out,
               std::vector<std::vector<double>>& theta_out) {
  RngStream rng(seed);
  const int g = data.groups;

  // Overdispersed starts around the data.
  std::vector<double> theta(static_cast<std::size_t>(g));
  for (auto& t : theta) t = rng.normal(data.grand_mean, 2.0 * data.grand_sd);
  double mu = rng.normal(data.grand_mean, 2.0 * data.grand_sd);
  double delta2 = opt.freeze_delta ? *opt.freeze_delta * *opt.freeze_delta
                                   : data.grand_sd * data.grand_sd * (0.5 + rng.uniform());
  double tau2 = opt.freeze_tau ? *opt.freeze_tau * *opt.freeze_tau
                               : data.grand_sd * data.grand_sd * (0.5 + rng.uniform());

  const long retained = (sched.iterations - sched.burn_in) / sched.thin;
  mu_out.reserve(retained);
  tau_out.reserve(retained);
  delta_out.reserve(retained);
  theta_out.assign(static_cast<std::size_t>(g), {});
  for (auto& v : theta_out) v.reserve(retained);

  for (long it = 0; it < sched.iterations; ++it) {
    // theta_i | rest: precision-weighted combination of the group mean and mu.
    for (int i = 0; i < g; ++i) {
      const double prec = data.n[static_cast<std::size_t>(i)] / delta2 + 1.0 / tau2;
      const double mean =
          (data.sum[static_cast<std::size_t>(i)] / delta2 + mu / tau2) / prec;
      theta[static_cast<std::size_t>(i)] = rng.normal(mean, std::sqrt(1.0 / prec));
    }
    // mu | theta, tau2 (flat prior).
    double theta_mean = 0.0;
    for (double t : theta) theta_mean += t;
    theta_mean /= g;
    mu = rng.normal(theta_mean, std::sqrt(tau2 / g));
    // delta2 | Y, theta: scaled-inv-chi2(n_total, SSE/n_total).
    if (!opt.freeze_delta) {
      double sse = 0.0;
      for (int i = 0; i < g; ++i)
        for (double v : y[static_cast<std::size_t>(i)]) {
          const double d = v - theta[static_cast<std::size_t>(i)];
          sse += d * d;
        }
      delta2 = scaled_inv_chi2(rng, data.n_total, std::max(sse, 1e-12) / data.n_total);
    }
    // tau2 | theta, mu: flat-on-tau prior gives scaled-inv-chi2(g-1, S/(g-1)),
    // truncated at the cap. With a single group the conditional is improper,
    // so the cap acts as the (proper) upper bound of the uniform prior.
    if (!opt.freeze_tau) {
      double s = 0.0;
      for (double t : theta) s += (t - mu) * (t - mu);
      s = std::max(s, 1e-12);
      const double cap2 = opt.tau_cap * opt.tau_cap;
      if (g > 1) {
        int tries = 0;
        do {
          tau2 = scaled_inv_chi2(rng, g - 1, s / (g - 1));
        } while (tau2 > cap2 && ++tries < 1000);
        if (tau2 > cap2) tau2 = cap2;
      } else {
        // p(tau | theta, mu) ~ exp(-s/(2 tau^2)) on (0, cap]: rejection from a
        // uniform proposal on tau; the density is increasing in tau, so the
        // cap boundary is the fallback when acceptance is vanishing.
        int tries = 0;
        bool accepted = false;
        while (!accepted && ++tries <= 10000) {
          const double u = std::max(rng.uniform(), 1e-12) * opt.tau_cap;
          tau2 = u * u;
          accepted = rng.uniform() <= std::exp(-s / (2.0 * tau2));
        }
        if (!accepted) tau2 = cap2;
      }
    }

    if (it >= sched.burn_in && (it - sched.burn_in) % sched.thin == 0) {
      mu_out.push_back(mu);
      tau_out.push_back(std::sqrt(tau2));
      delta_out.push_back(std::sqrt(delta2));
      for (int i = 0; i < g; ++i)
        theta_out[static_cast<std::size_t>(i)].push_back(theta[static_cast<std::size_t>(i)]);
    }
  }
}

ParameterSummary summarize_param(const std::vector<double>& pooled) {
  ParameterSummary s;
  s.mode = kde_mode(pooled);
  double mean = 0.0;
  for (double v : pooled) mean += v;
  mean /= static_cast<double>(pooled.size());
  double var = 0.0;
  for (double v : pooled) var += (v - mean) * (v - mean);
  s.mean = mean;
  s.sd = std::sqrt(var / std::max<std::size_t>(pooled.size() - 1, 1));
  std::vector<double> copy = pooled;
  s.ci_low = sample_quantile(copy, 0.025);
  s.ci_high = sample_quantile(copy, 0.975);
  return s;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  const std::size_t n = chains.front().size();
  std::vector<double> means(m, 0.0), vars(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    for (double v : chains[c]) means[c] += v;
    means[c] /= static_cast<double>(n);
    for (double v : chains[c]) vars[c] += (v - means[c]) * (v - means[c]);
    vars[c] /= static_cast<double>(n - 1);
  }
  double grand = 0.0;
  for (double v : means) grand += v;
  grand /= static_cast<double>(m);
  double b = 0.0;
  for (double v : means) b += (v - grand) * (v - grand);
  b *= static_cast<double>(n) / static_cast<double>(m - 1);
  double w = 0.0;
  for (double v : vars) w += v;
  w /= static_cast<double>(m);
  if (w < 1e-300) return 1.0;  // exactly degenerate chains
  const double var_plus = (static_cast<double>(n - 1) / n) * w + b / n;
  return std::sqrt(var_plus / w);
}

}  // namespace

PosteriorSamples gibbs_run(const std::vector<std::vector<double>>& y,
                           const GibbsSchedule& schedule, const GibbsOptions& options,
                           std::uint64_t seed, unsigned n_threads) {
  if (schedule.chains < 1) throw ParameterError("gibbs_run: need >= 1 chain");
  if (schedule.burn_in < 0 || schedule.burn_in >= schedule.iterations)
    throw ParameterError("gibbs_run: burn-in must lie inside the iteration budget");
  if (schedule.thin < 1) throw ParameterError("gibbs_run: thin must be >= 1");
  if (options.tau_cap <= 0.0) throw ParameterError("gibbs_run: tau_cap must be > 0");
  const auto data = summarize_data(y);

  PosteriorSamples out;
  out.schedule = schedule;
  out.options = options;
  out.n_groups = data.groups;
  out.mu.resize(static_cast<std::size_t>(schedule.chains));
  out.tau.resize(static_cast<std::size_t>(schedule.chains));
  out.delta.resize(static_cast<std::size_t>(schedule.chains));
  out.theta.resize(static_cast<std::size_t>(schedule.chains));

  parallel_for(static_cast<std::size_t>(schedule.chains), n_threads, [&](std::size_t c) {
    run_chain(y, data, schedule, options,
              derive_seed(seed, {stream_purpose::kChain, c}), out.mu[c], out.tau[c],
              out.delta[c], out.theta[c]);
  });
  return out;
}

std::map<std::string, double> convergence_diagnostic(const PosteriorSamples& samples) {
  if (samples.mu.size() < 2)
    throw ParameterError("convergence_diagnostic: need at least 2 chains");
  std::map<std::string, double> rhat;
  rhat["mu"] = gelman_rubin(samples.mu);
  rhat["tau"] = gelman_rubin(samples.tau);
  rhat["delta"] = gelman_rubin(samples.delta);
  for (int i = 0; i < samples.n_groups; ++i) {
    std::vector<std::vector<double>> chains;
    for (const auto& c : samples.theta) chains.push_back(c[static_cast<std::size_t>(i)]);
    rhat["theta_" + std::to_string(i)] = gelman_rubin(chains);
  }
  return rhat;
}

EstimateReport summarize(const PosteriorSamples& samples) {
  if (samples.mu.empty() || samples.retained_per_chain() == 0)
    throw EstimationError("summarize: no retained draws");
  auto pool = [&](const std::vector<std::vector<double>>& chains) {
    std::vector<double> pooled;
    for (const auto& c : chains) pooled.insert(pooled.end(), c.begin(), c.end());
    return pooled;
  };
  EstimateReport report;
  report.schedule = samples.schedule;
  report.tau_cap = samples.options.tau_cap;
  report.mu = summarize_param(pool(samples.mu));
  report.tau = summarize_param(pool(samples.tau));
  report.delta = summarize_param(pool(samples.delta));
  for (int i = 0; i < samples.n_groups; ++i) {
    std::vector<std::vector<double>> chains;
    for (const auto& c : samples.theta) chains.push_back(c[static_cast<std::size_t>(i)]);
    report.theta.push_back(summarize_param(pool(chains)));
  }
  if (samples.mu.size() >= 2) {
    report.rhat = convergence_diagnostic(samples);
    report.converged = true;
    for (const auto& [name, r] : report.rhat) report.converged = report.converged && r < 1.01;
  }
  return report;
}

}  // namespace quenchlab
