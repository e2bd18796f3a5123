// Copyright 2026 The qesc developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#include "qesc/run_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace qesc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw ConfigError("config: " + path + " " + reason);
}

void expect_object(const json& j, const std::string& path,
                   std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (key == name) known = true;
    if (!known) fail(path.empty() ? key : path + "." + key, "is not a known field");
  }
}

double get_double(const json& j, const std::string& path, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "must be a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& path, const char* key,
            int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "must be an integer");
  return v.get<int>();
}

bool get_bool(const json& j, const std::string& path, const char* key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "must be a boolean");
  return v.get<bool>();
}

std::uint64_t get_u64(const json& j, const std::string& path, const char* key,
                      std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer())
    fail(path + "." + key, "must be a non-negative integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0)
    fail(path + "." + key, "must be a non-negative integer");
  return v.get<std::uint64_t>();
}

void require_positive(double value, const std::string& path) {
  if (!(value > 0.0)) fail(path, "must be > 0");
}

void require_non_negative(double value, const std::string& path) {
  if (!(value >= 0.0)) fail(path, "must be >= 0");
}

DriftChannelConfig parse_drift_channel(const json& j, const std::string& path,
                                       const DriftChannelConfig& fallback) {
  expect_object(j, path,
                {"amplitude", "period_hours", "amplitude_sigma_pct",
                 "omega_sigma_pct"});
  DriftChannelConfig channel = fallback;
  channel.amplitude = get_double(j, path, "amplitude", fallback.amplitude);
  require_non_negative(channel.amplitude, path + ".amplitude");
  const double fallback_period =
      fallback.omega > 0.0 ? 2.0 * std::numbers::pi / fallback.omega / 3600.0
                           : 48.0;
  const double period_hours =
      get_double(j, path, "period_hours", fallback_period);
  require_positive(period_hours, path + ".period_hours");
  channel.omega = 2.0 * std::numbers::pi / (period_hours * 3600.0);
  const double amplitude_pct = get_double(
      j, path, "amplitude_sigma_pct",
      channel.amplitude > 0.0
          ? 100.0 * fallback.sigma_amplitude / fallback.amplitude
          : 0.0);
  require_non_negative(amplitude_pct, path + ".amplitude_sigma_pct");
  channel.sigma_amplitude = amplitude_pct / 100.0 * channel.amplitude;
  const double omega_pct =
      get_double(j, path, "omega_sigma_pct",
                 100.0 * fallback.sigma_omega / fallback.omega);
  require_non_negative(omega_pct, path + ".omega_sigma_pct");
  channel.sigma_omega = omega_pct / 100.0 * channel.omega;
  return channel;
}

void parse_drift(const json& j, LoopConfig& loop) {
  const std::string path = "drift";
  expect_object(j, path,
                {"dt_seconds", "horizon_hours", "g2e_floor", "g2e", "psi_2q"});
  loop.drift.dt = get_double(j, path, "dt_seconds", loop.drift.dt);
  require_positive(loop.drift.dt, path + ".dt_seconds");
  const double horizon_hours = get_double(j, path, "horizon_hours", 0.0);
  require_non_negative(horizon_hours, path + ".horizon_hours");
  loop.drift.horizon = horizon_hours * 3600.0;
  loop.drift.g2e_floor =
      get_double(j, path, "g2e_floor", loop.drift.g2e_floor);
  require_positive(loop.drift.g2e_floor, path + ".g2e_floor");
  if (j.contains("g2e"))
    loop.drift.g2e = parse_drift_channel(j.at("g2e"), "drift.g2e",
                                         loop.drift.g2e);
  if (j.contains("psi_2q"))
    loop.drift.psi_2q = parse_drift_channel(j.at("psi_2q"), "drift.psi_2q",
                                            loop.drift.psi_2q);
}

void parse_drb(const json& j, LoopConfig& loop) {
  const std::string path = "drb";
  expect_object(j, path,
                {"depths", "circuits_per_depth", "shots_per_circuit",
                 "two_qubit_fraction", "inversion",
                 "per_shot_overhead_seconds"});
  if (j.contains("depths")) {
    const json& depths = j.at("depths");
    if (!depths.is_array() || depths.empty())
      fail(path + ".depths", "must be a non-empty array of integers");
    loop.drb.depths.clear();
    for (const json& d : depths) {
      if (!d.is_number_integer())
        fail(path + ".depths", "must be a non-empty array of integers");
      loop.drb.depths.push_back(d.get<int>());
    }
  }
  loop.drb.circuits_per_depth =
      get_int(j, path, "circuits_per_depth", loop.drb.circuits_per_depth);
  loop.drb.shots_per_circuit =
      get_int(j, path, "shots_per_circuit", loop.drb.shots_per_circuit);
  loop.drb.two_qubit_fraction =
      get_double(j, path, "two_qubit_fraction", loop.drb.two_qubit_fraction);
  loop.drb.per_shot_overhead_seconds =
      get_double(j, path, "per_shot_overhead_seconds",
                 loop.drb.per_shot_overhead_seconds);
  if (j.contains("inversion")) {
    const json& inversion = j.at("inversion");
    if (!inversion.is_string())
      fail(path + ".inversion", "must be \"perfect\" or \"mirror\"");
    const std::string mode = inversion.get<std::string>();
    if (mode == "perfect")
      loop.drb.inversion = InversionMode::kPerfect;
    else if (mode == "mirror")
      loop.drb.inversion = InversionMode::kMirror;
    else
      fail(path + ".inversion", "must be \"perfect\" or \"mirror\"");
  }
  try {
    validate_design(loop.drb);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(std::string("config: drb invalid: ") + error.what());
  }
}

void parse_esc(const json& j, LoopConfig& loop) {
  const std::string path = "esc";
  expect_object(j, path,
                {"n_t", "iterations_per_calibration",
                 "freeze_drift_within_iteration", "knobs"});
  loop.schedule.n_t = get_int(j, path, "n_t", loop.schedule.n_t);
  if (loop.schedule.n_t < 2) fail(path + ".n_t", "must be >= 2");
  loop.iterations_per_calibration = get_int(
      j, path, "iterations_per_calibration", loop.iterations_per_calibration);
  if (loop.iterations_per_calibration < 1)
    fail(path + ".iterations_per_calibration", "must be >= 1");
  loop.freeze_drift_within_iteration =
      get_bool(j, path, "freeze_drift_within_iteration",
               loop.freeze_drift_within_iteration);
  if (j.contains("knobs")) {
    const json& knobs = j.at("knobs");
    if (!knobs.is_array() || knobs.size() != loop.knobs.size())
      fail(path + ".knobs", "must be an array of 3 knob objects");
    for (std::size_t k = 0; k < loop.knobs.size(); ++k) {
      const json& knob = knobs.at(k);
      const std::string knob_path =
          path + ".knobs[" + std::to_string(k) + "]";
      expect_object(knob, knob_path,
                    {"name", "amplitude", "omega_cycles", "phase", "gain"});
      if (knob.contains("name")) {
        if (!knob.at("name").is_string())
          fail(knob_path + ".name", "must be a string");
        if (knob.at("name").get<std::string>() != loop.knobs[k].name)
          fail(knob_path + ".name",
               "must be \"" + loop.knobs[k].name + "\" (fixed knob order)");
      }
      loop.knobs[k].amplitude =
          get_double(knob, knob_path, "amplitude", loop.knobs[k].amplitude);
      require_positive(loop.knobs[k].amplitude, knob_path + ".amplitude");
      const int fallback_cycles = static_cast<int>(
          std::llround(loop.knobs[k].omega / (2.0 * std::numbers::pi)));
      const int cycles =
          get_int(knob, knob_path, "omega_cycles", fallback_cycles);
      if (cycles < 1) fail(knob_path + ".omega_cycles", "must be >= 1");
      loop.knobs[k].omega = 2.0 * std::numbers::pi * cycles;
      loop.knobs[k].phase =
          get_double(knob, knob_path, "phase", loop.knobs[k].phase);
      loop.knobs[k].gain =
          get_double(knob, knob_path, "gain", loop.knobs[k].gain);
    }
  }
  try {
    validate_knobs(loop.knobs, loop.schedule);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(std::string("config: esc invalid: ") + error.what());
  }
}

void parse_loop(const json& j, LoopConfig& loop) {
  const std::string path = "loop";
  expect_object(j, path,
                {"duration_hours", "calibration_interval_minutes",
                 "reporting_interval_minutes", "initial_offsets",
                 "reference_eval_per_iteration"});
  loop.duration_hours =
      get_double(j, path, "duration_hours", loop.duration_hours);
  require_positive(loop.duration_hours, path + ".duration_hours");
  loop.calibration_interval_minutes =
      get_double(j, path, "calibration_interval_minutes",
                 loop.calibration_interval_minutes);
  require_positive(loop.calibration_interval_minutes,
                   path + ".calibration_interval_minutes");
  loop.reporting_interval_minutes = get_double(
      j, path, "reporting_interval_minutes", loop.reporting_interval_minutes);
  require_positive(loop.reporting_interval_minutes,
                   path + ".reporting_interval_minutes");
  loop.reference_eval_per_iteration =
      get_bool(j, path, "reference_eval_per_iteration",
               loop.reference_eval_per_iteration);
  if (j.contains("initial_offsets")) {
    const json& offsets = j.at("initial_offsets");
    const std::string offsets_path = path + ".initial_offsets";
    expect_object(offsets, offsets_path, {"g1g2", "psi1", "psi2"});
    loop.initial_offsets(kKnobG1G2) =
        get_double(offsets, offsets_path, "g1g2", 0.0);
    loop.initial_offsets(kKnobPsi1) =
        get_double(offsets, offsets_path, "psi1", 0.0);
    loop.initial_offsets(kKnobPsi2) =
        get_double(offsets, offsets_path, "psi2", 0.0);
  }
}

}  // namespace

SeedSet seed_set(std::uint64_t master_seed) {
  SeedSet seeds;
  seeds.master = master_seed;
  seeds.drift = derive_seed(master_seed, kStreamDrift);
  seeds.drb = derive_seed(master_seed, kStreamDrb);
  seeds.esc = derive_seed(master_seed, kStreamEsc);
  return seeds;
}

std::string fnv1a64_hex(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("config: not valid JSON: ") + error.what());
  }
  expect_object(j, "",
                {"master_seed", "drift", "drb", "esc", "loop", "offset_demo"});
  RunConfig config;
  config.loop = default_loop_config();
  config.loop.master_seed = get_u64(j, "", "master_seed", 0);
  if (j.contains("drift")) parse_drift(j.at("drift"), config.loop);
  if (j.contains("drb")) parse_drb(j.at("drb"), config.loop);
  if (j.contains("esc")) parse_esc(j.at("esc"), config.loop);
  if (j.contains("loop")) parse_loop(j.at("loop"), config.loop);
  if (j.contains("offset_demo")) {
    const json& demo = j.at("offset_demo");
    expect_object(demo, "offset_demo", {"target_iteration_minutes"});
    config.offset_demo.target_iteration_minutes =
        get_double(demo, "offset_demo", "target_iteration_minutes",
                   config.offset_demo.target_iteration_minutes);
    require_positive(config.offset_demo.target_iteration_minutes,
                     "offset_demo.target_iteration_minutes");
  }
  try {
    validate_loop_config(config.loop);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(std::string("config: invalid: ") + error.what());
  }
  config.config_hash = fnv1a64_hex(j.dump());
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

std::vector<GridCell> parse_grid_space(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("space: not valid JSON: ") + error.what());
  }
  expect_object(j, "", {"cells"});
  if (!j.contains("cells") || !j.at("cells").is_array() ||
      j.at("cells").empty())
    throw ConfigError("config: cells must be a non-empty array");
  std::vector<GridCell> cells;
  int index = 0;
  for (const json& c : j.at("cells")) {
    const std::string path = "cells[" + std::to_string(index++) + "]";
    expect_object(c, path,
                  {"calibration_interval_minutes", "circuits_per_depth",
                   "shots_per_circuit", "iterations_per_calibration", "n_t"});
    GridCell cell;
    cell.calibration_interval_minutes =
        get_double(c, path, "calibration_interval_minutes",
                   cell.calibration_interval_minutes);
    require_positive(cell.calibration_interval_minutes,
                     path + ".calibration_interval_minutes");
    cell.circuits_per_depth =
        get_int(c, path, "circuits_per_depth", cell.circuits_per_depth);
    cell.shots_per_circuit =
        get_int(c, path, "shots_per_circuit", cell.shots_per_circuit);
    cell.iterations_per_calibration = get_int(
        c, path, "iterations_per_calibration", cell.iterations_per_calibration);
    cell.n_t = get_int(c, path, "n_t", cell.n_t);
    if (cell.circuits_per_depth < 1)
      fail(path + ".circuits_per_depth", "must be >= 1");
    if (cell.shots_per_circuit < 1)
      fail(path + ".shots_per_circuit", "must be >= 1");
    if (cell.iterations_per_calibration < 1)
      fail(path + ".iterations_per_calibration", "must be >= 1");
    if (cell.n_t < 2) fail(path + ".n_t", "must be >= 2");
    cells.push_back(cell);
  }
  return cells;
}

std::vector<GridCell> load_grid_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_grid_space(text.str());
}

}  // namespace qesc
