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

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qesc {

// One optimizer knob: sinusoidal dither A sin(omega t + phase) on the
// schedule grid and an integrator gain for the demodulated update.
struct EscKnob {
  std::string name;
  double amplitude = 0.0;
  double omega = 0.0;  // rad per unit schedule time; a multiple of 2 pi
  double phase = 0.0;
  double gain = 0.0;
};

// Dimensionless iteration time grid t_i = i / n_t, i = 0 .. n_t - 1.
struct EscSchedule {
  int n_t = 30;
  double time(int i) const { return static_cast<double>(i) / n_t; }
};

// Distinct harmonics with full periods on the schedule are exactly
// orthogonal; validation enforces integer cycle counts and distinguishable
// (omega, phase) channels.
void validate_knobs(std::span<const EscKnob> knobs, const EscSchedule& schedule);

Eigen::ArrayXd perturbation_sequence(const EscKnob& knob,
                                     const EscSchedule& schedule);

// Mean subtraction; the high-pass stage of the demodulator.
Eigen::ArrayXd high_pass(const Eigen::ArrayXd& samples);

// xi = sum_i pert_i * filtered_i / n; a pure linear response c * pert yields
// xi = c A^2 / 2 exactly on a full-period grid.
double demodulate(const Eigen::ArrayXd& pert, const Eigen::ArrayXd& filtered);

struct EscKnobRecord {
  double base_before = 0.0;
  double xi = 0.0;
  double delta = 0.0;
};

struct EscIterationRecord {
  std::vector<EscKnobRecord> knobs;
  Eigen::ArrayXd objective_samples;
};

struct EscState {
  Eigen::VectorXd base;
  int iteration = 0;
  std::vector<EscIterationRecord> history;
};

using EscObjective = std::function<double(const Eigen::VectorXd&)>;

// One iteration: evaluate the objective at base + simultaneous perturbations
// over the schedule, demodulate per knob, and apply base += gain * xi.
void esc_iteration(EscState& state, std::span<const EscKnob> knobs,
                   const EscSchedule& schedule, const EscObjective& objective);

EscState run_esc(EscState state, std::span<const EscKnob> knobs,
                 const EscSchedule& schedule, const EscObjective& objective,
                 int n_iterations);

}  // namespace qesc
