// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "quenchlab/errors.hpp"
#include "quenchlab/rng.hpp"

namespace quenchlab {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ParameterError("config: " + where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ParameterError("config: unknown key '" + key + "' in " + where);
}

double number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ParameterError("config: " + key + " must be a number");
  return obj[key].get<double>();
}

std::uint64_t unsigned_number(const json& obj, const std::string& key,
                              std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned())
    throw ParameterError("config: " + key + " must be a non-negative integer");
  return obj[key].get<std::uint64_t>();
}

// Scalar -> uniform vector, or explicit per-entry list of expected length.
std::vector<double> scalar_or_list(const json& obj, const std::string& key,
                                   std::size_t length, double fallback) {
  if (!obj.contains(key)) return std::vector<double>(length, fallback);
  const auto& v = obj[key];
  if (v.is_number()) return std::vector<double>(length, v.get<double>());
  if (v.is_array()) {
    if (v.size() != length)
      throw ParameterError("config: " + key + " must have " + std::to_string(length) +
                           " entries");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ParameterError("config: " + key + " entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  throw ParameterError("config: " + key + " must be a number or an array");
}

}  // namespace

std::string config_hash_of_text(const std::string& canonical_json) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  for (unsigned char c : canonical_json) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config: JSON parse error: ") + e.what());
  }

  require_keys(root, "top level",
               {"schema_version", "model", "disorder", "plan", "noise", "solver",
                "output", "calibration"});
  RunConfig cfg;
  if (!root.contains("schema_version") || !root["schema_version"].is_number_integer())
    throw ParameterError("config: schema_version is required");
  cfg.schema_version = root["schema_version"].get<int>();
  if (cfg.schema_version != 1)
    throw ParameterError("config: unsupported schema_version " +
                         std::to_string(cfg.schema_version));

  // --- model ---------------------------------------------------------------
  if (!root.contains("model")) throw ParameterError("config: model section is required");
  const auto& jm = root["model"];
  require_keys(jm, "model", {"sites", "cap", "j1", "j2", "u", "omega", "j1_mhz"});
  const int sites = static_cast<int>(number(jm, "sites", 12));
  const int cap = static_cast<int>(number(jm, "cap", 3));
  cfg.units.j1_mhz = number(jm, "j1_mhz", 11.5);
  cfg.model.sites = sites;
  cfg.model.cap = cap;
  cfg.model.j1 = scalar_or_list(jm, "j1", static_cast<std::size_t>(std::max(0, sites - 1)), 1.0);
  cfg.model.j2 =
      scalar_or_list(jm, "j2", static_cast<std::size_t>(std::max(0, sites - 2)), 1.2 / 11.5);
  cfg.model.u = number(jm, "u", -22.0);
  cfg.model.omega = number(jm, "omega", 0.0);
  cfg.model.validate();

  // --- disorder --------------------------------------------------------------
  std::vector<double> grid;
  if (root.contains("disorder")) {
    const auto& jd = root["disorder"];
    require_keys(jd, "disorder", {"grid", "min", "max", "count"});
    if (jd.contains("grid")) {
      if (!jd["grid"].is_array()) throw ParameterError("config: disorder.grid must be an array");
      for (const auto& x : jd["grid"]) grid.push_back(x.get<double>());
    } else {
      const double lo = number(jd, "min", 1.0);
      const double hi = number(jd, "max", 7.0);
      const int count = static_cast<int>(number(jd, "count", 13));
      if (count < 1) throw ParameterError("config: disorder.count must be >= 1");
      for (int i = 0; i < count; ++i)
        grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
  } else {
    for (int i = 0; i <= 12; ++i) grid.push_back(1.0 + 0.5 * i);
  }

  // --- plan ------------------------------------------------------------------
  cfg.plan = RunPlan::paper_defaults();
  cfg.plan.disorder_grid = grid;
  if (root.contains("plan")) {
    const auto& jp = root["plan"];
    require_keys(jp, "plan",
                 {"states", "realizations", "shots", "eq_window", "master_seed", "mode"});
    if (jp.contains("states")) {
      if (jp["states"].is_string()) {
        const std::string name = jp["states"].get<std::string>();
        if (name == "paper10") {
          cfg.plan.initial_states = RunPlan::paper_defaults().initial_states;
        } else if (name == "neel") {
          Configuration neel(static_cast<std::size_t>(sites), 0);
          for (int l = 0; l < sites; l += 2) neel[static_cast<std::size_t>(l)] = 1;
          cfg.plan.initial_states = {neel};
        } else {
          throw ParameterError("config: plan.states must be 'paper10', 'neel' or a list");
        }
      } else if (jp["states"].is_array()) {
        cfg.plan.initial_states.clear();
        for (const auto& js : jp["states"]) {
          if (!js.is_array()) throw ParameterError("config: each state must be a 0/1 array");
          Configuration c;
          for (const auto& x : js) c.push_back(static_cast<Occupation>(x.get<int>()));
          cfg.plan.initial_states.push_back(c);
        }
      } else {
        throw ParameterError("config: plan.states must be a string or an array");
      }
    }
    cfg.plan.realizations = static_cast<int>(number(jp, "realizations", 60));
    cfg.plan.shots = static_cast<int>(number(jp, "shots", 3000));
    cfg.plan.master_seed = unsigned_number(jp, "master_seed", 0);
    if (jp.contains("eq_window")) {
      const auto& jw = jp["eq_window"];
      require_keys(jw, "plan.eq_window", {"points", "t_min", "t_max"});
      cfg.plan.eq_times = RunPlan::equilibrium_window(
          static_cast<int>(number(jw, "points", 5)), number(jw, "t_min", 7.9),
          number(jw, "t_max", 10.8));
    }
    if (jp.contains("mode")) {
      const std::string mode = jp["mode"].get<std::string>();
      if (mode == "exact")
        cfg.plan.mode = RunMode::kExact;
      else if (mode == "shots")
        cfg.plan.mode = RunMode::kShots;
      else
        throw ParameterError("config: plan.mode must be 'exact' or 'shots'");
    }
  }

  // --- noise -------------------------------------------------------------------
  if (root.contains("noise")) {
    const auto& jn = root["noise"];
    require_keys(jn, "noise",
                 {"enabled", "t1_us", "t2_us", "readout", "trajectories", "dense_dim_cap"});
    const bool enabled = jn.contains("enabled") && jn["enabled"].get<bool>();
    if (enabled) {
      const auto t1 = scalar_or_list(jn, "t1_us", static_cast<std::size_t>(sites), 51.9);
      const auto t2 = scalar_or_list(jn, "t2_us", static_cast<std::size_t>(sites), 8.1);
      cfg.noise = NoiseSpec::from_device_times(t1, t2, cfg.units);
    }
    cfg.solver.lindblad.n_trajectories =
        static_cast<int>(number(jn, "trajectories", 2000));
    cfg.solver.lindblad.dense_dim_cap =
        static_cast<std::size_t>(number(jn, "dense_dim_cap", 512));
    if (jn.contains("readout")) {
      const auto& jr = jn["readout"];
      require_keys(jr, "noise.readout", {"enabled", "f00", "f11"});
      if (jr.contains("enabled") && jr["enabled"].get<bool>()) {
        ReadoutModel readout;
        readout.f00 = scalar_or_list(jr, "f00", static_cast<std::size_t>(sites), 0.96);
        readout.f11 = scalar_or_list(jr, "f11", static_cast<std::size_t>(sites), 0.89);
        readout.validate(sites);
        cfg.plan.readout = readout;
      }
    }
  }

  // --- solver -------------------------------------------------------------------
  if (root.contains("solver")) {
    const auto& js = root["solver"];
    require_keys(js, "solver",
                 {"krylov_tol", "krylov_basis", "lindblad_rtol", "lindblad_atol",
                  "jump_time_resolution"});
    cfg.solver.krylov.tol = number(js, "krylov_tol", 1e-10);
    cfg.solver.krylov.max_basis = static_cast<int>(number(js, "krylov_basis", 48));
    cfg.solver.lindblad.dense_rel_tol = number(js, "lindblad_rtol", 1e-10);
    cfg.solver.lindblad.dense_abs_tol = number(js, "lindblad_atol", 1e-12);
    cfg.solver.lindblad.jump_time_resolution = number(js, "jump_time_resolution", 1e-6);
    cfg.solver.lindblad.krylov = cfg.solver.krylov;
  }

  // --- output -------------------------------------------------------------------
  cfg.distribution_h = {1.0, 2.0, 3.0, 7.0};
  if (root.contains("output")) {
    const auto& jo = root["output"];
    require_keys(jo, "output", {"distribution_h"});
    if (jo.contains("distribution_h")) {
      cfg.distribution_h.clear();
      for (const auto& x : jo["distribution_h"]) cfg.distribution_h.push_back(x.get<double>());
    }
  }

  // --- calibration -----------------------------------------------------------------
  if (root.contains("calibration")) {
    const auto& jc = root["calibration"];
    require_keys(jc, "calibration",
                 {"true_offsets_mhz", "random_max_mhz", "random_seed", "rounds", "step_mhz",
                  "time_points", "t_max", "nm_max_iterations", "nm_spread_mhz",
                  "nm_tol_mhz"});
    cfg.calibration.present = true;
    if (jc.contains("true_offsets_mhz")) {
      const auto mhz =
          scalar_or_list(jc, "true_offsets_mhz", static_cast<std::size_t>(sites), 0.0);
      for (double f : mhz)
        cfg.calibration.true_offsets.push_back(cfg.units.energy_from_mhz(f));
    } else {
      cfg.calibration.random_max_mhz = number(jc, "random_max_mhz", 15.4);
      cfg.calibration.random_seed = unsigned_number(jc, "random_seed", 1);
    }
    cfg.calibration.rounds = static_cast<int>(number(jc, "rounds", 1));
    if (cfg.calibration.rounds < 1)
      throw ParameterError("config: calibration.rounds must be >= 1");
    cfg.calibration.plan.step = cfg.units.energy_from_mhz(number(jc, "step_mhz", 5.0));
    cfg.calibration.plan.time_points = static_cast<int>(number(jc, "time_points", 40));
    cfg.calibration.plan.t_max = number(jc, "t_max", 10.0);
    cfg.calibration.nm.max_iterations =
        static_cast<int>(number(jc, "nm_max_iterations", 5000));
    cfg.calibration.nm.initial_spread =
        cfg.units.energy_from_mhz(number(jc, "nm_spread_mhz", 2.0));
    cfg.calibration.nm.diameter_tol =
        cfg.units.energy_from_mhz(number(jc, "nm_tol_mhz", 1e-3));
  }

  cfg.plan.validate(sites);
  cfg.hash = config_hash_of_text(root.dump());
  return cfg;
}

}  // namespace quenchlab
