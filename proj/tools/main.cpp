// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "quenchlab/commands.hpp"
#include "quenchlab/units.hpp"

namespace {

struct CliState {
  std::string config;
  std::string table;
  std::string peaks;
  std::string out = "out";
  unsigned jobs = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool force = false;
  bool allow_unconverged = false;
  quenchlab::GibbsSchedule schedule;
};

quenchlab::CommonArgs common_args(const CliState& s) {
  quenchlab::CommonArgs args;
  args.out_dir = s.out;
  args.jobs = s.jobs;
  if (s.seed_set) args.seed_override = s.seed;
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quenchlab: quench dynamics of a disordered Bose-Hubbard chain and the "
               "statistics that locate its localization transition"};
  app.require_subcommand(1);
  CliState state;

  auto add_common = [&](CLI::App* cmd, bool wants_seed = true) {
    cmd->add_option("--out", state.out, "output directory")->capture_default_str();
    cmd->add_option("--jobs", state.jobs, "worker threads (0 = all cores)");
    if (wants_seed) {
      auto* opt = cmd->add_option("--seed", state.seed, "override the master seed");
      cmd->callback([&state, opt] { state.seed_set = state.seed_set || opt->count() > 0; });
    }
  };

  auto* sweep = app.add_subcommand("sweep", "run the configured disorder sweep");
  sweep->add_option("--config", state.config, "run configuration (JSON)")->required();
  add_common(sweep);

  auto* analyze = app.add_subcommand("analyze", "reduce a sweep table to curves, "
                                                "distributions and the peak table");
  analyze->add_option("--table", state.table, "ensemble_table.csv from a sweep")->required();
  analyze->add_option("--config", state.config, "config for provenance checking");
  analyze->add_flag("--force", state.force, "proceed on config-hash mismatch");
  add_common(analyze, false);

  auto* estimate = app.add_subcommand("estimate", "fuse a 3 x I peak table into one "
                                                  "transition-point posterior");
  estimate->add_option("--peaks", state.peaks, "peak_table.csv")->required();
  estimate->add_flag("--allow-unconverged", state.allow_unconverged,
                     "exit 0 even when R-hat >= 1.01");
  estimate->add_option("--chains", state.schedule.chains, "independent chains")
      ->capture_default_str();
  estimate->add_option("--iterations", state.schedule.iterations, "iterations per chain")
      ->capture_default_str();
  estimate->add_option("--burn-in", state.schedule.burn_in, "discarded iterations")
      ->capture_default_str();
  estimate->add_option("--thin", state.schedule.thin, "retain every thin-th draw")
      ->capture_default_str();
  add_common(estimate);

  auto* calibrate = app.add_subcommand("calibrate", "synthetic frequency-alignment "
                                                    "round trips");
  calibrate->add_option("--config", state.config, "run configuration (JSON)")->required();
  add_common(calibrate);

  auto* units = app.add_subcommand("units", "convert between device units and J1 units");
  double j1_mhz = 11.5, mhz = 0, ns = 0, us = 0, energy = 0, jt = 0;
  units->add_option("--j1-mhz", j1_mhz, "J1/(2 pi) in MHz")->capture_default_str();
  auto* o_mhz = units->add_option("--mhz", mhz, "frequency in MHz -> energy in J1");
  auto* o_ns = units->add_option("--ns", ns, "time in ns -> J1 t");
  auto* o_us = units->add_option("--us", us, "lifetime in us -> rate in J1");
  auto* o_energy = units->add_option("--energy", energy, "energy in J1 -> MHz");
  auto* o_jt = units->add_option("--jt", jt, "J1 t -> ns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : quenchlab::kConfigError;
  }

  if (sweep->parsed()) return quenchlab::cmd_sweep(state.config, common_args(state));
  if (analyze->parsed()) {
    std::optional<std::filesystem::path> cfg;
    if (!state.config.empty()) cfg = state.config;
    return quenchlab::cmd_analyze(state.table, common_args(state), cfg, state.force);
  }
  if (estimate->parsed())
    return quenchlab::cmd_estimate(state.peaks, common_args(state), state.schedule,
                                   state.allow_unconverged);
  if (calibrate->parsed()) return quenchlab::cmd_calibrate(state.config, common_args(state));
  if (units->parsed()) {
    quenchlab::DeviceUnits u{j1_mhz};
    if (o_mhz->count()) std::cout << mhz << " MHz = " << u.energy_from_mhz(mhz) << " J1\n";
    if (o_ns->count()) std::cout << ns << " ns = J1 t " << u.time_from_ns(ns) << "\n";
    if (o_us->count())
      std::cout << "1/(" << us << " us) = " << u.rate_from_inverse_us(us) << " J1\n";
    if (o_energy->count())
      std::cout << energy << " J1 = " << u.mhz_from_energy(energy) << " MHz\n";
    if (o_jt->count()) std::cout << "J1 t " << jt << " = " << u.ns_from_time(jt) << " ns\n";
    return quenchlab::kOk;
  }
  return quenchlab::kConfigError;
}
