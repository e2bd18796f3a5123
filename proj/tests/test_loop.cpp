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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qesc/loop.hpp"

using namespace qesc;
using std::numbers::pi;

namespace {

DriftConfig zero_drift(double horizon = 0.0) {
  DriftConfig config;
  config.horizon = horizon;
  return config;
}

// A(t) and omega(t) stay put when the walk sigmas are zero, so every channel
// is the same deterministic sinusoid.
DriftConfig static_sinusoid(double a_g2e, double a_psi, double omega,
                            double horizon) {
  DriftConfig config;
  config.horizon = horizon;
  config.g2e = {a_g2e, omega, 0.0, 0.0};
  config.psi_2q = {a_psi, omega, 0.0, 0.0};
  return config;
}

LoopConfig tiny_loop_config() {
  LoopConfig config = default_loop_config();
  config.duration_hours = 0.5;
  config.calibration_interval_minutes = 10.0;
  config.reporting_interval_minutes = 5.0;
  config.iterations_per_calibration = 1;
  config.schedule.n_t = 10;
  config.drb.depths = {1, 16};
  config.drb.circuits_per_depth = 2;
  config.drb.shots_per_circuit = 10;
  config.drift = zero_drift();
  config.master_seed = 11;
  return config;
}

bool same_samples(const std::vector<LoopSample>& a,
                  const std::vector<LoopSample>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t_seconds != b[i].t_seconds) return false;
    if (a[i].controlled_error != b[i].controlled_error) return false;
    if (a[i].uncontrolled_error != b[i].uncontrolled_error) return false;
    if (a[i].knob_bases != b[i].knob_bases) return false;
    if (a[i].latents != b[i].latents) return false;
    if (a[i].objective_last != b[i].objective_last) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("power knob splits into equal drive gains") {
  const PlantControls controls =
      controls_from_knobs(Eigen::Vector3d{1.21, 0.3, -0.4});
  CHECK(controls.gain[0] == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(controls.gain[1] == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(controls.phase_trim[0] == 0.3);
  CHECK(controls.phase_trim[1] == -0.4);
  // The power floor keeps the plant defined if the controller walks off.
  const PlantControls floored =
      controls_from_knobs(Eigen::Vector3d{-2.0, 0.0, 0.0});
  CHECK(floored.gain[0] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("plant is transparent at zero drift and nominal controls") {
  const DriftTrajectory drift(zero_drift(1000.0));
  const NoisyPlant plant = make_ion_plant(drift, PlantControls{});
  Circuit circuit;
  circuit.layers.emplace_back(
      SingleQubitLayer{{{0, pi, 0.3}, {1, pi / 2, 1.1}}});
  circuit.layers.emplace_back(MsLayer{pi / 2, 0.1, 0.2});
  PerfectLayer perfect;
  perfect.unitary = ms_gate(0.4, 0.0, 0.0);
  circuit.layers.emplace_back(perfect);

  const Circuit executed = plant(circuit, 500.0);
  REQUIRE(executed.layers.size() == 3);
  const auto& single = std::get<SingleQubitLayer>(executed.layers[0]);
  CHECK(single.gates[0].theta == doctest::Approx(pi).epsilon(1e-12));
  CHECK(single.gates[0].phi == 0.3);
  CHECK(single.gates[1].theta == doctest::Approx(pi / 2).epsilon(1e-12));
  const auto& ms = std::get<MsLayer>(executed.layers[1]);
  CHECK(ms.chi == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(ms.phi1 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ms.phi2 == doctest::Approx(0.2).epsilon(1e-12));
  const auto& passthrough = std::get<PerfectLayer>(executed.layers[2]);
  CHECK((passthrough.unitary - perfect.unitary).norm() == 0.0);
}

TEST_CASE("plant applies gains, drift, and trims where they belong") {
  // sin(omega t) = 1 at t = 900 for omega = pi / 1800.
  const DriftTrajectory drift(static_sinusoid(0.05, 0.02, pi / 1800.0, 2000.0));
  PlantControls controls;
  controls.gain = {0.9, 0.9};
  controls.phase_trim = {0.05, -0.05};
  const NoisyPlant plant = make_ion_plant(drift, controls);

  Circuit circuit;
  circuit.layers.emplace_back(SingleQubitLayer{{{0, pi, 0.3}}});
  circuit.layers.emplace_back(MsLayer{pi / 2, 0.1, 0.2});
  const Circuit executed = plant(circuit, 900.0);

  const auto& single = std::get<SingleQubitLayer>(executed.layers[0]);
  // Requested pi scales by g * g2e = 0.9 * 1.05; phase has no single-qubit
  // trim to pick up.
  CHECK(single.gates[0].theta ==
        doctest::Approx(pi * 0.945).epsilon(1e-12));
  CHECK(single.gates[0].phi == doctest::Approx(0.3).epsilon(1e-12));
  const auto& ms = std::get<MsLayer>(executed.layers[1]);
  CHECK(ms.chi == doctest::Approx(pi / 2 * 0.945 * 0.945).epsilon(1e-12));
  CHECK(ms.phi1 == doctest::Approx(0.1 + 0.05 + 0.02).epsilon(1e-12));
  CHECK(ms.phi2 == doctest::Approx(0.2 - 0.05 + 0.02).epsilon(1e-12));
}

TEST_CASE("true two-qubit error closed forms") {
  const DriftTrajectory quiet(zero_drift(1000.0));
  CHECK(true_two_qubit_error(quiet, 100.0, kNominalKnobs) < 1e-12);

  // Pure phase offsets: trace of U_id^dag U_act is 2 + 2 cos d1 cos d2.
  const double d1 = 0.1, d2 = -0.2;
  const double tr = 2.0 + 2.0 * std::cos(d1) * std::cos(d2);
  const double expected = 1.0 - (tr * tr + 4.0) / 20.0;
  CHECK(true_two_qubit_error(quiet, 0.0, Eigen::Vector3d{1.0, d1, d2}) ==
        doctest::Approx(expected).epsilon(1e-12));

  // Analytically inverted knobs cancel a static drift exactly.
  const DriftTrajectory drift(
      static_sinusoid(0.05, 0.02, pi / 1800.0, 2000.0));
  const PhysicalState q0 = drift.physical_state(0, 900.0);
  const PhysicalState q1 = drift.physical_state(1, 900.0);
  const Eigen::Vector3d inverse{1.0 / (q0.g2e * q1.g2e), -q0.psi_2q,
                                -q1.psi_2q};
  CHECK(true_two_qubit_error(drift, 900.0, inverse) < 1e-12);
  CHECK(true_two_qubit_error(drift, 900.0, kNominalKnobs) > 1e-4);
}

TEST_CASE("closed loop bookkeeping on a quiet plant") {
  const LoopConfig config = tiny_loop_config();
  const LoopResult result = run_closed_loop(config);

  // Calibrations fire at 0, 10, 20 minutes within the 30 minute window.
  CHECK(result.calibrations == 3);
  CHECK(result.esc_rows.size() == 9);
  REQUIRE(result.samples.size() == 7);
  for (int i = 0; i < 7; ++i)
    CHECK(result.samples[i].t_seconds == 300.0 * i);

  // Every evaluation charges the same closed-form wall time.
  const double eval_seconds = drb_runtime_seconds(config.drb, 1);
  CHECK(eval_seconds == doctest::Approx(20 * 17 * 547.5e-6).epsilon(1e-12));
  CHECK(result.charged_seconds ==
        doctest::Approx(30 * eval_seconds).epsilon(1e-12));

  // No drift: the frozen-knob reference error stays at numerical zero.
  for (const LoopSample& sample : result.samples) {
    CHECK(sample.uncontrolled_error < 1e-12);
    CHECK(sample.latents[0] == 1.0);
    CHECK(sample.latents[1] == 0.0);
  }
  CHECK(result.samples[0].objective_last == 0.0);
  CHECK(result.samples.back().objective_last > 0.5);
  CHECK(result.g2e_clamp_events == 0);

  // Shot noise rattles the knobs but must not fling them anywhere.
  CHECK(std::abs(result.final_bases(kKnobG1G2) - 1.0) < 0.05);
  CHECK(std::abs(result.final_bases(kKnobPsi1)) < 0.05);
  CHECK(std::abs(result.final_bases(kKnobPsi2)) < 0.05);

  const LoopResult again = run_closed_loop(config);
  CHECK(same_samples(result.samples, again.samples));
  CHECK(result.final_bases == again.final_bases);
  CHECK(result.charged_seconds == again.charged_seconds);
}

TEST_CASE("reference evaluations cost time and are recorded") {
  LoopConfig config = tiny_loop_config();
  config.reference_eval_per_iteration = true;
  const LoopResult result = run_closed_loop(config);
  REQUIRE(result.references.size() == 3);
  const double eval_seconds = drb_runtime_seconds(config.drb, 1);
  CHECK(result.charged_seconds ==
        doctest::Approx(33 * eval_seconds).epsilon(1e-12));
  for (const ReferenceSample& reference : result.references) {
    CHECK(reference.estimate.objective > 0.5);
    CHECK(reference.t_seconds > 0.0);
    CHECK(reference.knob_bases[0] != 0.0);
  }
  CHECK(result.references[0].calibration == 0);
  CHECK(result.references[2].calibration == 2);
}

TEST_CASE("uncontrolled column ignores the controller settings") {
  LoopConfig config = tiny_loop_config();
  config.drift = default_drift_config(0.0, 0);
  config.master_seed = 5;
  const LoopResult base = run_closed_loop(config);
  for (auto& knob : config.knobs) knob.gain *= 0.5;
  config.freeze_drift_within_iteration = true;
  const LoopResult altered = run_closed_loop(config);

  REQUIRE(base.samples.size() == altered.samples.size());
  for (std::size_t i = 0; i < base.samples.size(); ++i) {
    CHECK(base.samples[i].uncontrolled_error ==
          altered.samples[i].uncontrolled_error);
    CHECK(base.samples[i].latents == altered.samples[i].latents);
  }
  CHECK(base.samples.back().uncontrolled_error > 0.0);
}

TEST_CASE("suppression ratio handles degenerate sample sets") {
  std::vector<LoopSample> samples(4);
  for (auto& s : samples) {
    s.controlled_error = 1.0;
    s.uncontrolled_error = 3.0;
  }
  CHECK(suppression_ratio(samples) == doctest::Approx(3.0));
  for (auto& s : samples) s.uncontrolled_error = 0.0;
  for (auto& s : samples) s.controlled_error = 0.0;
  CHECK(suppression_ratio(samples) == 1.0);
  samples[0].uncontrolled_error = 1.0;
  CHECK(std::isinf(suppression_ratio(samples)));
  CHECK_THROWS_AS(suppression_ratio({}), std::invalid_argument);
}

TEST_CASE("controller pulls injected phase offsets back out") {
  LoopConfig config = default_loop_config();
  config.duration_hours = 1.6;
  config.calibration_interval_minutes = 12.0;
  config.iterations_per_calibration = 1;
  config.schedule.n_t = 25;
  config.drb.depths = {1, 50};
  config.drb.circuits_per_depth = 4;
  config.drb.shots_per_circuit = 100;
  config.drift = zero_drift();
  config.initial_offsets = Eigen::Vector3d{0.0, 0.1, -0.1};
  config.master_seed = 3;

  const LoopResult result = run_closed_loop(config);
  CHECK(result.calibrations == 8);
  CHECK(std::abs(result.final_bases(kKnobPsi1)) < 0.02);
  CHECK(std::abs(result.final_bases(kKnobPsi2)) < 0.02);
  CHECK(std::abs(result.final_bases(kKnobG1G2) - 1.0) < 0.02);
  // The error at the end sits well below the injected-offset level.
  const double injected = result.samples.front().controlled_error;
  CHECK(injected > 1e-3);
  CHECK(result.samples.back().controlled_error < injected / 10.0);
}

TEST_CASE("grid search replays one trajectory across cells") {
  LoopConfig base = tiny_loop_config();
  base.drift = default_drift_config(0.0, 0);
  base.master_seed = 9;
  const std::vector<GridCell> cells{
      {10.0, 2, 10, 1, 10},
      {15.0, 3, 8, 1, 12},
      {10.0, 2, 10, 1, 6},  // dither frequencies do not fit in 6 samples
  };
  const std::vector<GridResult> results = grid_search(cells, base);
  REQUIRE(results.size() == 3);
  CHECK(results[0].status == "ok");
  CHECK(results[1].status == "ok");
  CHECK(results[2].status.find("dithers") != std::string::npos);

  // Cell 0 matches the base cadence: 3 calibrations x 10 evaluations.
  DrbDesign design = base.drb;
  const double eval_seconds = drb_runtime_seconds(design, 1);
  CHECK(results[0].runtime_min_per_hour ==
        doctest::Approx(30 * eval_seconds / 60.0 / 0.5).epsilon(1e-9));

  // Same seed, same horizon: the uncontrolled mean is bitwise shared.
  CHECK(results[0].mean_uncontrolled == results[1].mean_uncontrolled);
  CHECK(results[0].mean_uncontrolled > 0.0);
  CHECK(results[0].suppression > 0.0);
}

TEST_CASE("loop configuration is validated") {
  LoopConfig config = tiny_loop_config();
  config.duration_hours = 0.0;
  CHECK_THROWS_AS(run_closed_loop(config), std::invalid_argument);
  config = tiny_loop_config();
  config.iterations_per_calibration = 0;
  CHECK_THROWS_AS(run_closed_loop(config), std::invalid_argument);
  config = tiny_loop_config();
  std::swap(config.knobs[1].name, config.knobs[2].name);
  CHECK_THROWS_AS(run_closed_loop(config), std::invalid_argument);
  config = tiny_loop_config();
  config.schedule.n_t = 6;
  CHECK_THROWS_AS(run_closed_loop(config), std::invalid_argument);
  config = tiny_loop_config();
  config.drb.depths = {};
  CHECK_THROWS_AS(run_closed_loop(config), std::invalid_argument);
}

TEST_CASE("an explicit short drift horizon surfaces as out_of_range") {
  LoopConfig config = tiny_loop_config();
  config.drift.horizon = 600.0;  // cut off mid-run
  CHECK_THROWS_AS(run_closed_loop(config), std::out_of_range);
}
