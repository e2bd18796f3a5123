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
#include <numbers>
#include <vector>

#include "qesc/rng.hpp"

namespace qesc {

// Latent hardware state of one qubit's drive: a gain-to-angle scale error and
// a phase offset that only two-qubit operations pick up.
struct PhysicalState {
  double g2e = 1.0;
  double psi_2q = 0.0;
};

// Software-side control state for one qubit: a drive gain and a phase.
struct ControlState {
  double g = 1.0;
  double psi = 0.0;
};

struct SingleQubitParams {
  double theta = 0.0;
  double phi = 0.0;
};

struct MsParams {
  double chi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

// Calibration anchors: nominal controls on nominal hardware produce the
// native pi/2 angles.
inline constexpr double kThetaPerGain = std::numbers::pi / 2;
inline constexpr double kChiPerGainProduct = std::numbers::pi / 2;

// theta = k1 * g * g2e, phi = psi.
SingleQubitParams map_single(const PhysicalState& physical,
                             const ControlState& control);

// chi = k2 * (g_a * g2e_a) * (g_b * g2e_b), phi_i = psi_i + psi_2q_i.
MsParams map_ms(const PhysicalState& physical_a, const ControlState& control_a,
                const PhysicalState& physical_b, const ControlState& control_b);

// Analytic compensation for a known physical state: g = 1 / g2e restores the
// native angles and psi = -psi_2q cancels the two-qubit phase offset.
ControlState inverse_controls(const PhysicalState& physical);

enum class DriftParam : int {
  kG2eQ0 = 0,
  kPsi2qQ0 = 1,
  kG2eQ1 = 2,
  kPsi2qQ1 = 3,
};

inline constexpr int kNumDriftParams = 4;

// a(t) = A(t) sin(omega(t) t) where A and omega take independent
// Gaussian random-walk steps every dt.
struct DriftChannelConfig {
  double amplitude = 0.0;      // A(0)
  double omega = 0.0;          // omega(0), rad/s
  double sigma_amplitude = 0.0;  // random-walk step, per dt
  double sigma_omega = 0.0;      // random-walk step, rad/s per dt
};

struct DriftConfig {
  double dt = 60.0;       // seconds between random-walk steps
  double horizon = 0.0;   // seconds of trajectory to precompute
  DriftChannelConfig g2e;
  DriftChannelConfig psi_2q;
  double g2e_floor = 0.01;
  std::uint64_t seed = 0;
};

// Defaults sized so a 15 h window sees peak uncontrolled two-qubit error of
// order 1e-2, dominated by the g2e channels, drifting slowly compared to a
// 50-75 minute calibration cadence.
DriftConfig default_drift_config(double horizon_seconds, std::uint64_t seed);

// Four mutually independent channels (g2e and psi_2q per qubit), each driven
// by its own sub-stream of the config seed. Evaluation at a given time is
// pure apart from the clamp-event counter.
class DriftTrajectory {
 public:
  explicit DriftTrajectory(const DriftConfig& config);

  const DriftConfig& config() const { return config_; }

  // Raw channel value a(t); throws std::out_of_range outside [0, horizon].
  double value(DriftParam param, double t) const;

  // g2e = 1 + a_g2e(t) clamped from below, psi_2q = a_psi(t).
  PhysicalState physical_state(int qubit, double t) const;

  // Number of physical_state evaluations that hit the g2e floor so far.
  std::uint64_t clamp_events() const { return clamp_events_; }

 private:
  DriftConfig config_;
  int n_steps_ = 0;
  std::array<std::vector<double>, kNumDriftParams> amplitude_;
  std::array<std::vector<double>, kNumDriftParams> omega_;
  mutable std::uint64_t clamp_events_ = 0;
};

}  // namespace qesc
