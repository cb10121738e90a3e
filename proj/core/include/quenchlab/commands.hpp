// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_COMMANDS_HPP
#define QUENCHLAB_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "quenchlab/inference.hpp"

namespace quenchlab {

/// Process exit codes shared by the CLI and the command layer.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kComputeError = 3,
  kNotConverged = 4,
};

struct CommonArgs {
  std::filesystem::path out_dir;
  unsigned jobs = 0;  // 0 = hardware concurrency
  std::optional<std::uint64_t> seed_override;
};

/// sweep: run the configured (state, realization, h) sweep and write
/// ensemble_table.csv plus manifest.json.
int cmd_sweep(const std::filesystem::path& config_path, const CommonArgs& args);

/// analyze: reduce a table to curves, distributions, the peak table and
/// plot-ready JSON series. When a config is supplied its hash must match the
/// table unless force is set.
int cmd_analyze(const std::filesystem::path& table_path, const CommonArgs& args,
                const std::optional<std::filesystem::path>& config_path = std::nullopt,
                bool force = false,
                const std::vector<double>& distribution_h = {1.0, 2.0, 3.0, 7.0});

/// estimate: hierarchical Bayesian fusion of a 3 x I peak table.
int cmd_estimate(const std::filesystem::path& peaks_path, const CommonArgs& args,
                 const GibbsSchedule& schedule = {}, bool allow_unconverged = false);

/// calibrate: inject -> fit -> report round trips on synthetic staircase data.
int cmd_calibrate(const std::filesystem::path& config_path, const CommonArgs& args);

}  // namespace quenchlab

#endif
