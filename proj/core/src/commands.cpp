// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <thread>

#include "quenchlab/config.hpp"
#include "quenchlab/density.hpp"
#include "quenchlab/errors.hpp"
#include "quenchlab/statistics.hpp"

namespace quenchlab {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

unsigned effective_jobs(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

json curve_to_json(const DisorderCurve& c) {
  json j;
  j["h"] = c.h;
  j["mean"] = c.mean;
  j["std"] = c.std_dev;
  j["effective_r"] = c.effective_r;
  std::vector<int> usable(c.usable.begin(), c.usable.end());
  j["usable"] = usable;
  return j;
}

void write_curves_csv(const std::filesystem::path& path, const EnsembleTable& table,
                      Quantity q, const std::vector<DisorderCurve>& per_state,
                      const DisorderCurve& averaged) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open " + path.string());
  out << "# schema=quenchlab-curves-v1 quantity=" << quantity_letter(q) << "\n";
  out << "# config_hash=" << table.config_hash << "\n";
  out << "# master_seed=" << table.master_seed << "\n";
  out << "h";
  for (std::size_t s = 0; s < per_state.size(); ++s)
    out << ",mean_s" << s << ",std_s" << s;
  out << ",mean_avg,std_avg\n";
  char buf[32];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << ',' << buf;
  };
  for (std::size_t i = 0; i < averaged.h.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", averaged.h[i]);
    out << buf;
    for (const auto& c : per_state) {
      emit(c.mean[i]);
      emit(c.std_dev[i]);
    }
    emit(averaged.mean[i]);
    emit(averaged.std_dev[i]);
    out << "\n";
  }
}

int closest_h_index(const std::vector<double>& grid, double h) {
  int best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - h) < std::abs(grid[static_cast<std::size_t>(best)] - h))
      best = static_cast<int>(i);
  return best;
}

}  // namespace

int cmd_sweep(const std::filesystem::path& config_path, const CommonArgs& args) {
  RunConfig cfg;
  try {
    cfg = RunConfig::from_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  if (args.seed_override) cfg.plan.master_seed = *args.seed_override;

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);

  const auto t0 = std::chrono::steady_clock::now();
  SweepSettings settings;
  settings.solver = cfg.solver;
  settings.jobs = effective_jobs(args.jobs);
  SweepResult result;
  try {
    result = run_sweep(cfg.model, cfg.noise, cfg.plan, settings);
  } catch (const std::exception& e) {
    std::cerr << "sweep failed: " << e.what() << "\n";
    return kComputeError;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  result.table.config_hash = cfg.hash;
  result.table.write_csv(args.out_dir / "ensemble_table.csv");

  json manifest;
  manifest["schema"] = "quenchlab-manifest-v1";
  manifest["version"] = kVersion;
  manifest["config_hash"] = cfg.hash;
  manifest["master_seed"] = cfg.plan.master_seed;
  manifest["wall_time_s"] = wall;
  manifest["jobs"] = settings.jobs;
  manifest["mode"] = result.table.mode;
  manifest["cells_per_quantity"] = static_cast<long>(cfg.plan.initial_states.size()) *
                                   cfg.plan.realizations *
                                   static_cast<long>(cfg.plan.disorder_grid.size());
  manifest["failures"] = result.failures;
  write_json(args.out_dir / "manifest.json", manifest);

  if (!result.failures.empty()) {
    std::cerr << result.failures.size() << " cells failed; partial outputs kept\n";
    return kComputeError;
  }
  return kOk;
}

int cmd_analyze(const std::filesystem::path& table_path, const CommonArgs& args,
                const std::optional<std::filesystem::path>& config_path, bool force,
                const std::vector<double>& distribution_h) {
  EnsembleTable table;
  try {
    table = EnsembleTable::read_csv(table_path);
  } catch (const std::exception& e) {
    std::cerr << "cannot read table: " << e.what() << "\n";
    return kConfigError;
  }
  std::vector<double> dist_h = distribution_h;
  if (config_path) {
    try {
      const auto cfg = RunConfig::from_file(*config_path);
      if (cfg.hash != table.config_hash && !force) {
        std::cerr << "config hash " << cfg.hash << " does not match table hash "
                  << table.config_hash << " (use --force to override)\n";
        return kConfigError;
      }
      dist_h = cfg.distribution_h;
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);

  try {
    json means_fig, std_fig, dists_fig;
    for (auto& fig : {&means_fig, &std_fig, &dists_fig}) {
      (*fig)["config_hash"] = table.config_hash;
      (*fig)["master_seed"] = table.master_seed;
      (*fig)["h_grid"] = table.h_grid();
    }

    PeakTable peaks = peak_table(table);
    for (Quantity q : kAllQuantities) {
      const std::string letter(1, quantity_letter(q));
      std::vector<DisorderCurve> per_state;
      for (int s = 0; s < table.n_states(); ++s)
        per_state.push_back(disorder_curve(table, q, s));
      const auto averaged = average_over_states(per_state);

      write_curves_csv(args.out_dir / ("curves_" + letter + ".csv"), table, q, per_state,
                       averaged);
      json jq;
      jq["average"] = curve_to_json(averaged);
      for (std::size_t s = 0; s < per_state.size(); ++s)
        jq["per_state"].push_back(curve_to_json(per_state[s]));
      means_fig["quantities"][letter] = jq;

      json js;
      js["average_std"] = averaged.std_dev;
      for (const auto& c : per_state) js["per_state_std"].push_back(c.std_dev);
      if (const auto avg_peak = find_peak(averaged)) js["peak_h"] = *avg_peak;
      std_fig["quantities"][letter] = js;

      for (double h : dist_h) {
        const int hi = closest_h_index(table.h_grid(), h);
        try {
          const auto fit = fit_distribution(table, q, hi);
          json jd;
          jd["h"] = table.h_grid()[static_cast<std::size_t>(hi)];
          jd["grid"] = fit.grid;
          jd["density"] = fit.density;
          jd["bin_edges"] = fit.bin_edges;
          jd["bin_counts"] = fit.bin_counts;
          jd["samples"] = fit.samples;
          jd["iqr"] = interquartile_range(fit);
          dists_fig["quantities"][letter].push_back(jd);
        } catch (const EstimationError&) {
          // not enough surviving samples at this h; skip the panel
        }
      }
    }

    write_json(args.out_dir / "figure_means.json", means_fig);
    write_json(args.out_dir / "figure_std.json", std_fig);
    write_json(args.out_dir / "figure_distributions.json", dists_fig);
    peaks.write_csv(args.out_dir / "peak_table.csv");

    json summary;
    summary["config_hash"] = table.config_hash;
    summary["master_seed"] = table.master_seed;
    summary["version"] = kVersion;
    for (Quantity q : kAllQuantities) {
      const std::string letter(1, quantity_letter(q));
      std::vector<double> row;
      for (int s = 0; s < table.n_states(); ++s) row.push_back(peaks.at(q, s));
      summary["peaks"][letter] = row;
      summary["peak_mean"][letter] = peaks.mean(q);
      summary["peak_std"][letter] = peaks.std_dev(q);
    }
    write_json(args.out_dir / "analysis_summary.json", summary);
  } catch (const std::exception& e) {
    std::cerr << "analyze failed: " << e.what() << "\n";
    return kComputeError;
  }
  return kOk;
}

int cmd_estimate(const std::filesystem::path& peaks_path, const CommonArgs& args,
                 const GibbsSchedule& schedule, bool allow_unconverged) {
  PeakTable peaks;
  try {
    peaks = PeakTable::read_csv(peaks_path);
  } catch (const std::exception& e) {
    std::cerr << "cannot read peak table: " << e.what() << "\n";
    return kConfigError;
  }
  // Drop states with any missing entry; the model wants a complete matrix.
  std::vector<std::vector<double>> y(3);
  for (int s = 0; s < peaks.n_states; ++s) {
    bool complete = true;
    for (Quantity q : kAllQuantities) complete = complete && std::isfinite(peaks.at(q, s));
    if (!complete) continue;
    for (Quantity q : kAllQuantities)
      y[static_cast<std::size_t>(q)].push_back(peaks.at(q, s));
  }
  if (y[0].size() < 2) {
    std::cerr << "peak table has fewer than 2 complete states\n";
    return kConfigError;
  }

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);

  try {
    const std::uint64_t seed = args.seed_override.value_or(0);
    auto samples = gibbs_run(y, schedule, {}, seed, effective_jobs(args.jobs));
    auto report = summarize(samples);

    // Posterior draws, one row per retained draw.
    std::ofstream draws(args.out_dir / "posterior_draws.csv", std::ios::binary);
    draws << "# schema=quenchlab-posterior-v1\n";
    draws << "chain,draw,mu,tau,delta";
    for (int g = 0; g < samples.n_groups; ++g)
      draws << ",theta_" << quantity_letter(static_cast<Quantity>(g));
    draws << "\n";
    char buf[32];
    for (std::size_t c = 0; c < samples.mu.size(); ++c) {
      for (std::size_t d = 0; d < samples.mu[c].size(); ++d) {
        draws << c << ',' << d;
        auto emit = [&](double v) {
          std::snprintf(buf, sizeof(buf), "%.17g", v);
          draws << ',' << buf;
        };
        emit(samples.mu[c][d]);
        emit(samples.tau[c][d]);
        emit(samples.delta[c][d]);
        for (int g = 0; g < samples.n_groups; ++g)
          emit(samples.theta[c][static_cast<std::size_t>(g)][d]);
        draws << "\n";
      }
    }

    json j;
    j["schema"] = "quenchlab-estimate-v1";
    j["version"] = kVersion;
    j["seed"] = seed;
    j["schedule"] = {{"chains", report.schedule.chains},
                     {"iterations", report.schedule.iterations},
                     {"burn_in", report.schedule.burn_in},
                     {"thin", report.schedule.thin}};
    j["prior"] = {{"mu", "flat"}, {"delta2", "1/delta2"},
                  {"tau", "uniform(0," + std::to_string(report.tau_cap) + ")"}};
    auto param = [](const ParameterSummary& p) {
      return json{{"mode", p.mode}, {"mean", p.mean},   {"sd", p.sd},
                  {"ci_low", p.ci_low}, {"ci_high", p.ci_high}};
    };
    j["mu"] = param(report.mu);
    j["tau"] = param(report.tau);
    j["delta"] = param(report.delta);
    for (std::size_t g = 0; g < report.theta.size(); ++g)
      j["theta"][std::string(1, quantity_letter(static_cast<Quantity>(g)))] =
          param(report.theta[g]);
    j["rhat"] = report.rhat;
    j["converged"] = report.converged;
    j["n_states_used"] = y[0].size();
    write_json(args.out_dir / "estimate_report.json", j);

    if (!report.converged) {
      std::cerr << "chains failed the convergence gate (R-hat >= 1.01)\n";
      return allow_unconverged ? kOk : kNotConverged;
    }
  } catch (const std::exception& e) {
    std::cerr << "estimate failed: " << e.what() << "\n";
    return kComputeError;
  }
  return kOk;
}

int cmd_calibrate(const std::filesystem::path& config_path, const CommonArgs& args) {
  RunConfig cfg;
  try {
    cfg = RunConfig::from_file(config_path);
    if (!cfg.calibration.present)
      throw ParameterError("config has no calibration section");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);

  try {
    auto truth = cfg.calibration.true_offsets;
    if (cfg.calibration.random_max_mhz) {
      RngStream rng(derive_seed(args.seed_override.value_or(cfg.calibration.random_seed),
                                {stream_purpose::kCalibration}));
      truth.resize(static_cast<std::size_t>(cfg.model.sites));
      for (auto& v : truth)
        v = cfg.units.energy_from_mhz(
            rng.uniform(-*cfg.calibration.random_max_mhz, *cfg.calibration.random_max_mhz));
    }
    // The staircase probe only sees the single-excitation sector.
    ModelSpec probe = cfg.model;
    probe.cap = 1;

    json j;
    j["schema"] = "quenchlab-calibration-v1";
    j["version"] = kVersion;
    j["config_hash"] = cfg.hash;
    j["step_mhz"] = cfg.units.mhz_from_energy(cfg.calibration.plan.step);
    bool all_converged = true;

    std::vector<double> residual = truth;
    for (int round = 0; round < cfg.calibration.rounds; ++round) {
      auto observed = simulate_staircase(probe, residual, cfg.calibration.plan);
      auto estimate =
          fit_offsets(observed, probe, cfg.calibration.plan, cfg.calibration.nm);
      all_converged = all_converged && estimate.converged;

      json round_json;
      double max_before = 0.0, max_after = 0.0;
      // compare in the zero-mean gauge
      double mean = 0.0;
      for (double v : residual) mean += v;
      mean /= static_cast<double>(residual.size());
      for (std::size_t l = 0; l < residual.size(); ++l) {
        max_before = std::max(max_before, std::abs(residual[l] - mean));
        residual[l] -= mean + estimate.offsets[l];
        max_after = std::max(max_after, std::abs(residual[l]));
      }
      round_json["max_residual_before_mhz"] = cfg.units.mhz_from_energy(max_before);
      round_json["max_residual_after_mhz"] = cfg.units.mhz_from_energy(max_after);
      round_json["cost"] = estimate.cost;
      round_json["iterations"] = estimate.iterations;
      round_json["converged"] = estimate.converged;
      std::vector<double> est_mhz;
      for (double v : estimate.offsets) est_mhz.push_back(cfg.units.mhz_from_energy(v));
      round_json["estimated_offsets_mhz"] = est_mhz;
      j["rounds"].push_back(round_json);
    }
    std::vector<double> truth_mhz;
    for (double v : truth) truth_mhz.push_back(cfg.units.mhz_from_energy(v));
    j["true_offsets_mhz"] = truth_mhz;
    j["converged"] = all_converged;
    write_json(args.out_dir / "calibration_report.json", j);
    if (!all_converged) std::cerr << "warning: optimizer hit the iteration cap\n";
  } catch (const std::exception& e) {
    std::cerr << "calibrate failed: " << e.what() << "\n";
    return kComputeError;
  }
  return kOk;
}

}  // namespace quenchlab
