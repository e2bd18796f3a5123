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

#include "qesc/esc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qesc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cycle_count(const EscKnob& knob) { return knob.omega / kTwoPi; }

}  // namespace

void validate_knobs(std::span<const EscKnob> knobs,
                    const EscSchedule& schedule) {
  if (schedule.n_t < 2)
    throw std::invalid_argument("esc: schedule needs at least two samples");
  if (knobs.empty()) throw std::invalid_argument("esc: no knobs");
  for (const EscKnob& knob : knobs) {
    if (knob.name.empty()) throw std::invalid_argument("esc: unnamed knob");
    if (!(knob.amplitude > 0.0))
      throw std::invalid_argument("esc: knob '" + knob.name +
                                  "' needs a positive amplitude");
    const double cycles = cycle_count(knob);
    const double rounded = std::round(cycles);
    if (!(cycles > 0.5) || std::abs(cycles - rounded) > 1e-9)
      throw std::invalid_argument(
          "esc: knob '" + knob.name +
          "' omega must be a positive integer multiple of 2 pi");
    // At n_t / 2 cycles the sampled sinusoid is identically zero.
    if (2.0 * rounded >= schedule.n_t)
      throw std::invalid_argument("esc: knob '" + knob.name +
                                  "' dithers faster than the schedule resolves");
  }
  for (std::size_t a = 0; a < knobs.size(); ++a) {
    for (std::size_t b = a + 1; b < knobs.size(); ++b) {
      if (knobs[a].name == knobs[b].name)
        throw std::invalid_argument("esc: duplicate knob name '" +
                                    knobs[a].name + "'");
      if (std::round(cycle_count(knobs[a])) !=
          std::round(cycle_count(knobs[b])))
        continue;
      const double dphi =
          std::remainder(knobs[a].phase - knobs[b].phase, kTwoPi);
      if (std::abs(dphi) < 1e-9)
        throw std::invalid_argument("esc: knobs '" + knobs[a].name + "' and '" +
                                    knobs[b].name +
                                    "' share a dither channel");
    }
  }
}

Eigen::ArrayXd perturbation_sequence(const EscKnob& knob,
                                     const EscSchedule& schedule) {
  Eigen::ArrayXd pert(schedule.n_t);
  for (int i = 0; i < schedule.n_t; ++i)
    pert(i) = knob.amplitude * std::sin(knob.omega * schedule.time(i) +
                                        knob.phase);
  return pert;
}

Eigen::ArrayXd high_pass(const Eigen::ArrayXd& samples) {
  if (samples.size() == 0)
    throw std::invalid_argument("esc: high_pass on empty sample set");
  return samples - samples.mean();
}

double demodulate(const Eigen::ArrayXd& pert, const Eigen::ArrayXd& filtered) {
  if (pert.size() != filtered.size() || pert.size() == 0)
    throw std::invalid_argument("esc: demodulate size mismatch");
  return (pert * filtered).sum() / static_cast<double>(pert.size());
}

void esc_iteration(EscState& state, std::span<const EscKnob> knobs,
                   const EscSchedule& schedule, const EscObjective& objective) {
  validate_knobs(knobs, schedule);
  const int n_knobs = static_cast<int>(knobs.size());
  if (state.base.size() != n_knobs)
    throw std::invalid_argument("esc: state dimension mismatch");

  Eigen::MatrixXd pert(n_knobs, schedule.n_t);
  for (int k = 0; k < n_knobs; ++k)
    pert.row(k) = perturbation_sequence(knobs[k], schedule).transpose();

  EscIterationRecord record;
  record.objective_samples.resize(schedule.n_t);
  for (int i = 0; i < schedule.n_t; ++i) {
    const Eigen::VectorXd probe = state.base + pert.col(i);
    record.objective_samples(i) = objective(probe);
  }

  const Eigen::ArrayXd filtered = high_pass(record.objective_samples);
  for (int k = 0; k < n_knobs; ++k) {
    EscKnobRecord knob_record;
    knob_record.base_before = state.base(k);
    knob_record.xi = demodulate(pert.row(k).transpose().array(), filtered);
    knob_record.delta = knobs[k].gain * knob_record.xi;
    state.base(k) += knob_record.delta;
    record.knobs.push_back(knob_record);
  }
  state.history.push_back(std::move(record));
  ++state.iteration;
}

EscState run_esc(EscState state, std::span<const EscKnob> knobs,
                 const EscSchedule& schedule, const EscObjective& objective,
                 int n_iterations) {
  if (n_iterations < 0)
    throw std::invalid_argument("esc: negative iteration count");
  for (int i = 0; i < n_iterations; ++i)
    esc_iteration(state, knobs, schedule, objective);
  return state;
}

}  // namespace qesc
