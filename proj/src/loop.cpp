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

#include "qesc/loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qesc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTimeSlack = 1e-9;
// Reference evaluations draw from a shot-stream index far above any n_t.
constexpr std::uint64_t kReferenceStream = 1ull << 40;

std::array<double, 3> to_array(const Eigen::Vector3d& v) {
  return {v(0), v(1), v(2)};
}

}  // namespace

PlantControls controls_from_knobs(const Eigen::Vector3d& knobs) {
  const double power = std::max(knobs(kKnobG1G2), 1e-4);
  const double gain = std::sqrt(power);
  PlantControls controls;
  controls.gain = {gain, gain};
  controls.phase_trim = {knobs(kKnobPsi1), knobs(kKnobPsi2)};
  return controls;
}

NoisyPlant make_ion_plant(const DriftTrajectory& drift,
                          const PlantControls& controls) {
  return [&drift, controls](const Circuit& circuit, double t) {
    validate_circuit(circuit);
    const PhysicalState q0 = drift.physical_state(0, t);
    const PhysicalState q1 = drift.physical_state(1, t);
    const std::array<const PhysicalState*, 2> physical{&q0, &q1};
    Circuit executed;
    executed.n_qubits = circuit.n_qubits;
    executed.layers.reserve(circuit.layers.size());
    for (const Layer& layer : circuit.layers) {
      if (const auto* single = std::get_if<SingleQubitLayer>(&layer)) {
        SingleQubitLayer out;
        for (const SingleQubitGate& gate : single->gates) {
          // Requested angles scale linearly with the executed pi/2 pulse.
          const SingleQubitParams pulse =
              map_single(*physical[gate.qubit],
                         {controls.gain[gate.qubit], gate.phi});
          out.gates.push_back(
              {gate.qubit, gate.theta * pulse.theta / kThetaPerGain,
               pulse.phi});
        }
        executed.layers.emplace_back(std::move(out));
      } else if (const auto* ms = std::get_if<MsLayer>(&layer)) {
        const MsParams pulse =
            map_ms(q0, {controls.gain[0], ms->phi1 + controls.phase_trim[0]},
                   q1, {controls.gain[1], ms->phi2 + controls.phase_trim[1]});
        executed.layers.emplace_back(
            MsLayer{ms->chi * pulse.chi / kChiPerGainProduct, pulse.phi1,
                    pulse.phi2});
      } else {
        executed.layers.push_back(layer);
      }
    }
    return executed;
  };
}

double true_two_qubit_error(const DriftTrajectory& drift, double t,
                            const Eigen::Vector3d& knobs) {
  const PlantControls controls = controls_from_knobs(knobs);
  const MsParams pulse = map_ms(
      drift.physical_state(0, t), {controls.gain[0], controls.phase_trim[0]},
      drift.physical_state(1, t), {controls.gain[1], controls.phase_trim[1]});
  const Eigen::Matrix4cd executed =
      ms_gate(pulse.chi, pulse.phi1, pulse.phi2);
  const Eigen::Matrix4cd ideal = ms_gate(kPi / 2, 0.0, 0.0);
  return 1.0 - average_gate_fidelity(executed, ideal);
}

std::vector<EscKnob> default_knobs() {
  return {{"g1g2", 0.00525, 8.0 * kPi, 0.0, 10000.0},
          {"psi1", 0.021, 4.0 * kPi, 0.0, 7500.0},
          {"psi2", 0.021, 4.0 * kPi, kPi, 10500.0}};
}

LoopConfig default_loop_config() {
  LoopConfig config;
  config.drift = default_drift_config(0.0, 0);
  return config;
}

void validate_loop_config(const LoopConfig& config) {
  if (!(config.duration_hours > 0.0))
    throw std::invalid_argument("loop: duration_hours must be positive");
  if (!(config.calibration_interval_minutes > 0.0))
    throw std::invalid_argument("loop: calibration interval must be positive");
  if (!(config.reporting_interval_minutes > 0.0))
    throw std::invalid_argument("loop: reporting interval must be positive");
  if (config.iterations_per_calibration < 1)
    throw std::invalid_argument("loop: need at least one iteration");
  if (config.knobs.size() != 3 || config.knobs[kKnobG1G2].name != "g1g2" ||
      config.knobs[kKnobPsi1].name != "psi1" ||
      config.knobs[kKnobPsi2].name != "psi2")
    throw std::invalid_argument(
        "loop: knobs must be [g1g2, psi1, psi2] in that order");
  if (static_cast<std::uint64_t>(config.schedule.n_t) >= kReferenceStream)
    throw std::invalid_argument("loop: schedule too long");
  validate_knobs(config.knobs, config.schedule);
  validate_design(config.drb);
  if (!(config.drift.dt > 0.0))
    throw std::invalid_argument("loop: drift dt must be positive");
}

double suppression_ratio(std::span<const LoopSample> samples) {
  if (samples.empty())
    throw std::invalid_argument("suppression_ratio: no samples");
  double controlled = 0.0, uncontrolled = 0.0;
  for (const LoopSample& s : samples) {
    controlled += s.controlled_error;
    uncontrolled += s.uncontrolled_error;
  }
  controlled /= static_cast<double>(samples.size());
  uncontrolled /= static_cast<double>(samples.size());
  constexpr double kTiny = 1e-18;
  if (controlled < kTiny && uncontrolled < kTiny) return 1.0;
  if (controlled < kTiny) return std::numeric_limits<double>::infinity();
  return uncontrolled / controlled;
}

LoopResult run_closed_loop(const LoopConfig& config) {
  validate_loop_config(config);
  const double duration_s = config.duration_hours * 3600.0;
  const double interval_s = config.calibration_interval_minutes * 60.0;
  const double report_s = config.reporting_interval_minutes * 60.0;

  DriftConfig drift_config = config.drift;
  drift_config.seed = derive_seed(config.master_seed, kStreamDrift);
  if (drift_config.horizon <= 0.0)
    drift_config.horizon = duration_s + interval_s + 3600.0;
  const DriftTrajectory drift(drift_config);

  const std::uint64_t drb_seed = derive_seed(config.master_seed, kStreamDrb);
  const double eval_seconds = drb_runtime_seconds(config.drb, 1);

  Eigen::Vector3d bases = kNominalKnobs + config.initial_offsets;
  const Eigen::Vector3d frozen_bases = bases;

  LoopResult result;
  double t = 0.0;
  double next_report = 0.0;
  double objective_last = 0.0;

  const auto probe = [&](double tp) {
    LoopSample sample;
    sample.t_seconds = tp;
    sample.controlled_error = true_two_qubit_error(drift, tp, bases);
    sample.uncontrolled_error = true_two_qubit_error(drift, tp, frozen_bases);
    sample.knob_bases = to_array(bases);
    const PhysicalState q0 = drift.physical_state(0, tp);
    const PhysicalState q1 = drift.physical_state(1, tp);
    sample.latents = {q0.g2e, q0.psi_2q, q1.g2e, q1.psi_2q};
    sample.objective_last = objective_last;
    result.samples.push_back(sample);
  };

  const auto advance_to = [&](double target) {
    while (next_report <= target + kTimeSlack &&
           next_report <= duration_s + kTimeSlack) {
      probe(next_report);
      next_report += report_s;
    }
    t = std::max(t, target);
  };

  const auto run_evaluation = [&](const Eigen::Vector3d& knobs, double t_eval,
                                  std::uint64_t sample_stream, int calibration,
                                  int iteration) {
    DrbDesign design = config.drb;
    design.seed = derive_seed(
        drb_seed, {static_cast<std::uint64_t>(calibration),
                   static_cast<std::uint64_t>(iteration), sample_stream});
    const NoisyPlant plant =
        make_ion_plant(drift, controls_from_knobs(knobs));
    const DrbEstimate estimate = run_drb(design, plant, t_eval);
    objective_last = estimate.objective;
    result.charged_seconds += eval_seconds;
    advance_to(t + eval_seconds);
    return estimate;
  };

  Eigen::MatrixXd pert(3, config.schedule.n_t);
  for (int k = 0; k < 3; ++k)
    pert.row(k) =
        perturbation_sequence(config.knobs[k], config.schedule).transpose();

  int global_iteration = 0;
  double next_calibration = 0.0;
  while (next_calibration < duration_s - kTimeSlack) {
    advance_to(next_calibration);
    for (int iter = 0; iter < config.iterations_per_calibration; ++iter) {
      const double iteration_start = t;
      Eigen::ArrayXd samples(config.schedule.n_t);
      for (int i = 0; i < config.schedule.n_t; ++i) {
        const Eigen::Vector3d probe_knobs = bases + pert.col(i);
        const double t_eval =
            config.freeze_drift_within_iteration ? iteration_start : t;
        samples(i) =
            run_evaluation(probe_knobs, t_eval,
                           static_cast<std::uint64_t>(i), result.calibrations,
                           iter)
                .objective;
      }
      const Eigen::ArrayXd filtered = high_pass(samples);
      for (int k = 0; k < 3; ++k) {
        EscTraceRow row;
        row.calibration = result.calibrations;
        row.iteration = global_iteration;
        row.knob = config.knobs[k].name;
        row.base_before = bases(k);
        row.xi = demodulate(pert.row(k).transpose().array(), filtered);
        row.delta = config.knobs[k].gain * row.xi;
        bases(k) += row.delta;
        result.esc_rows.push_back(std::move(row));
      }
      if (config.reference_eval_per_iteration) {
        ReferenceSample reference;
        reference.calibration = result.calibrations;
        reference.iteration = global_iteration;
        reference.knob_bases = to_array(bases);
        reference.estimate = run_evaluation(
            bases, config.freeze_drift_within_iteration ? iteration_start : t,
            kReferenceStream, result.calibrations, iter);
        reference.t_seconds = t;
        result.references.push_back(std::move(reference));
      }
      ++global_iteration;
    }
    ++result.calibrations;
    next_calibration += interval_s;
  }
  if (t < duration_s) advance_to(duration_s);

  result.final_bases = bases;
  result.g2e_clamp_events = drift.clamp_events();
  double controlled = 0.0, uncontrolled = 0.0;
  for (const LoopSample& s : result.samples) {
    controlled += s.controlled_error;
    uncontrolled += s.uncontrolled_error;
  }
  const double n = static_cast<double>(result.samples.size());
  result.mean_controlled = n > 0 ? controlled / n : 0.0;
  result.mean_uncontrolled = n > 0 ? uncontrolled / n : 0.0;
  result.suppression =
      result.samples.empty() ? 0.0 : suppression_ratio(result.samples);
  return result;
}

std::vector<GridResult> grid_search(std::span<const GridCell> cells,
                                    const LoopConfig& base) {
  std::vector<GridResult> results;
  results.reserve(cells.size());
  for (const GridCell& cell : cells) {
    GridResult row;
    row.cell = cell;
    LoopConfig config = base;
    config.calibration_interval_minutes = cell.calibration_interval_minutes;
    config.drb.circuits_per_depth = cell.circuits_per_depth;
    config.drb.shots_per_circuit = cell.shots_per_circuit;
    config.iterations_per_calibration = cell.iterations_per_calibration;
    config.schedule.n_t = cell.n_t;
    // One shared horizon so every cell replays the same drift trajectory.
    if (config.drift.horizon <= 0.0) {
      double max_interval = config.calibration_interval_minutes;
      for (const GridCell& c : cells)
        max_interval = std::max(max_interval, c.calibration_interval_minutes);
      config.drift.horizon =
          config.duration_hours * 3600.0 + max_interval * 60.0 + 3600.0;
    }
    try {
      const LoopResult result = run_closed_loop(config);
      row.runtime_min_per_hour =
          result.charged_seconds / 60.0 / config.duration_hours;
      row.suppression = result.suppression;
      row.mean_controlled = result.mean_controlled;
      row.mean_uncontrolled = result.mean_uncontrolled;
    } catch (const std::exception& error) {
      row.status = error.what();
    }
    results.push_back(std::move(row));
  }
  return results;
}

}  // namespace qesc
