// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_CONFIG_HPP
#define QUENCHLAB_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "quenchlab/calibration.hpp"
#include "quenchlab/lindblad.hpp"
#include "quenchlab/protocol.hpp"
#include "quenchlab/units.hpp"

namespace quenchlab {

struct CalibrationConfig {
  bool present = false;
  std::vector<double> true_offsets;  // J1 units; sampled when random_max_mhz set
  std::optional<double> random_max_mhz;
  std::uint64_t random_seed = 0;
  int rounds = 1;
  StaircasePlan plan{};
  NelderMeadOptions nm = default_fit_options();
};

/// Parsed and validated run configuration. The schema is strict: unknown keys
/// anywhere in the file are rejected before any compute starts.
struct RunConfig {
  int schema_version = 1;
  ModelSpec model;
  DeviceUnits units;
  RunPlan plan;
  std::optional<NoiseSpec> noise;
  SolverSettings solver;
  std::vector<double> distribution_h;  // where analyze fits distributions
  CalibrationConfig calibration;
  std::string hash;  // FNV-1a over the canonical JSON dump

  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_json_text(const std::string& text);
};

/// Hash of the canonical (sorted-key) JSON text, as embedded in outputs.
std::string config_hash_of_text(const std::string& canonical_json);

}  // namespace quenchlab

#endif
