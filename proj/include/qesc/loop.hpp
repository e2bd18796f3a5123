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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qesc/drb.hpp"
#include "qesc/esc.hpp"
#include "qesc/ion_model.hpp"

namespace qesc {

// Sub-stream ids hung off the master seed.
inline constexpr std::uint64_t kStreamDrift = 1;
inline constexpr std::uint64_t kStreamDrb = 2;
inline constexpr std::uint64_t kStreamEsc = 3;

// Knob order is fixed: [0] g1g2 two-qubit drive power, [1] psi1, [2] psi2
// phase trims.
inline constexpr int kKnobG1G2 = 0;
inline constexpr int kKnobPsi1 = 1;
inline constexpr int kKnobPsi2 = 2;
inline const Eigen::Vector3d kNominalKnobs{1.0, 0.0, 0.0};

struct PlantControls {
  std::array<double, 2> gain{1.0, 1.0};
  std::array<double, 2> phase_trim{0.0, 0.0};
};

// The power knob sets both drive gains to sqrt(g1g2); phase trims add to the
// two-qubit phases through the control maps.
PlantControls controls_from_knobs(const Eigen::Vector3d& knobs);

// Executed-circuit model over the drifting hardware: requested angles scale
// with gain * g2e, two-qubit phases pick up trim + psi_2q, perfect layers
// pass through. The trajectory must outlive the returned plant.
NoisyPlant make_ion_plant(const DriftTrajectory& drift,
                          const PlantControls& controls);

// 1 - average gate fidelity of the executed MS(pi/2, 0, 0) against the ideal
// one, under the given knob settings at time t.
double true_two_qubit_error(const DriftTrajectory& drift, double t,
                            const Eigen::Vector3d& knobs);

// Dither channels and gains for the three knobs (g1g2: A 0.00525, 4 cycles;
// psi1/psi2: A 0.021, 2 cycles, anti-phased).
std::vector<EscKnob> default_knobs();

struct LoopConfig {
  double duration_hours = 15.0;
  double calibration_interval_minutes = 75.0;
  double reporting_interval_minutes = 5.0;
  int iterations_per_calibration = 3;
  // Hold drift fixed at each iteration's start time while its objective
  // samples run (the clock still advances for bookkeeping).
  bool freeze_drift_within_iteration = false;
  // After each iteration, run one extra DRB at the updated bases and record
  // it; costs clock time like any evaluation.
  bool reference_eval_per_iteration = false;
  Eigen::Vector3d initial_offsets{0.0, 0.0, 0.0};
  EscSchedule schedule{30};
  std::vector<EscKnob> knobs = default_knobs();
  DrbDesign drb;
  DriftConfig drift;  // horizon <= 0 sizes it automatically
  std::uint64_t master_seed = 0;
};

LoopConfig default_loop_config();

void validate_loop_config(const LoopConfig& config);

// One reporting-grid probe. Errors are evaluated at the current knob bases
// (controlled) and at the time-zero bases (uncontrolled); latents are the
// four physical drift values.
struct LoopSample {
  double t_seconds = 0.0;
  double controlled_error = 0.0;
  double uncontrolled_error = 0.0;
  std::array<double, 3> knob_bases{};
  std::array<double, 4> latents{};
  double objective_last = 0.0;  // most recent DRB p estimate, 0 before any
};

struct EscTraceRow {
  int calibration = 0;
  int iteration = 0;  // global iteration index
  std::string knob;
  double base_before = 0.0;
  double xi = 0.0;
  double delta = 0.0;
};

struct ReferenceSample {
  int calibration = 0;
  int iteration = 0;
  double t_seconds = 0.0;
  std::array<double, 3> knob_bases{};
  DrbEstimate estimate;
};

struct LoopResult {
  std::vector<LoopSample> samples;
  std::vector<EscTraceRow> esc_rows;
  std::vector<ReferenceSample> references;
  Eigen::Vector3d final_bases{0.0, 0.0, 0.0};
  double charged_seconds = 0.0;
  std::uint64_t g2e_clamp_events = 0;
  int calibrations = 0;
  double mean_controlled = 0.0;
  double mean_uncontrolled = 0.0;
  double suppression = 0.0;
};

double suppression_ratio(std::span<const LoopSample> samples);

LoopResult run_closed_loop(const LoopConfig& config);

// One hyperparameter cell of the cadence/averaging trade-off study.
struct GridCell {
  double calibration_interval_minutes = 75.0;
  int circuits_per_depth = 5;
  int shots_per_circuit = 18;
  int iterations_per_calibration = 3;
  int n_t = 30;
};

struct GridResult {
  GridCell cell;
  double runtime_min_per_hour = 0.0;
  double suppression = 0.0;
  double mean_controlled = 0.0;
  double mean_uncontrolled = 0.0;
  std::string status = "ok";
};

// Every cell replays the identical drift trajectory (same seed, same
// horizon), so rows differ only in controller hyperparameters.
std::vector<GridResult> grid_search(std::span<const GridCell> cells,
                                    const LoopConfig& base);

}  // namespace qesc
