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

#include "qesc/ion_model.hpp"

#include <cmath>
#include <stdexcept>

namespace qesc {

SingleQubitParams map_single(const PhysicalState& physical,
                             const ControlState& control) {
  return {kThetaPerGain * control.g * physical.g2e, control.psi};
}

MsParams map_ms(const PhysicalState& physical_a, const ControlState& control_a,
                const PhysicalState& physical_b,
                const ControlState& control_b) {
  return {kChiPerGainProduct * (control_a.g * physical_a.g2e) *
              (control_b.g * physical_b.g2e),
          control_a.psi + physical_a.psi_2q,
          control_b.psi + physical_b.psi_2q};
}

ControlState inverse_controls(const PhysicalState& physical) {
  if (physical.g2e <= 0.0)
    throw std::invalid_argument("inverse_controls: g2e must be positive");
  return {1.0 / physical.g2e, -physical.psi_2q};
}

DriftConfig default_drift_config(double horizon_seconds, std::uint64_t seed) {
  constexpr double kPeriodSeconds = 48.0 * 3600.0;
  constexpr double kOmega0 = 2.0 * std::numbers::pi / kPeriodSeconds;
  DriftConfig config;
  config.dt = 60.0;
  config.horizon = horizon_seconds;
  config.g2e = {0.08, kOmega0, 0.01 * 0.08, 0.01 * kOmega0};
  config.psi_2q = {0.015, kOmega0, 0.01 * 0.015, 0.01 * kOmega0};
  config.seed = seed;
  return config;
}

DriftTrajectory::DriftTrajectory(const DriftConfig& config) : config_(config) {
  if (!(config_.dt > 0.0))
    throw std::invalid_argument("drift: dt must be positive");
  if (!(config_.horizon > 0.0))
    throw std::invalid_argument("drift: horizon must be positive");
  if (config_.g2e_floor <= 0.0)
    throw std::invalid_argument("drift: g2e floor must be positive");
  n_steps_ = static_cast<int>(std::ceil(config_.horizon / config_.dt)) + 1;
  for (int param = 0; param < kNumDriftParams; ++param) {
    const bool is_g2e =
        param == static_cast<int>(DriftParam::kG2eQ0) ||
        param == static_cast<int>(DriftParam::kG2eQ1);
    const DriftChannelConfig& channel = is_g2e ? config_.g2e : config_.psi_2q;
    Rng rng(derive_seed(config_.seed, static_cast<std::uint64_t>(param)));
    std::vector<double>& amp = amplitude_[param];
    std::vector<double>& omg = omega_[param];
    amp.resize(n_steps_ + 1);
    omg.resize(n_steps_ + 1);
    amp[0] = channel.amplitude;
    omg[0] = channel.omega;
    for (int k = 0; k < n_steps_; ++k) {
      amp[k + 1] = amp[k] + rng.gaussian(0.0, channel.sigma_amplitude);
      omg[k + 1] = omg[k] + rng.gaussian(0.0, channel.sigma_omega);
    }
  }
}

double DriftTrajectory::value(DriftParam param, double t) const {
  if (!(t >= 0.0) || t > config_.horizon)
    throw std::out_of_range("drift: time outside precomputed horizon");
  int k = static_cast<int>(t / config_.dt);
  if (k > n_steps_) k = n_steps_;
  const int idx = static_cast<int>(param);
  return amplitude_[idx][k] * std::sin(omega_[idx][k] * t);
}

PhysicalState DriftTrajectory::physical_state(int qubit, double t) const {
  if (qubit < 0 || qubit > 1)
    throw std::invalid_argument("drift: qubit must be 0 or 1");
  const DriftParam g2e_param =
      qubit == 0 ? DriftParam::kG2eQ0 : DriftParam::kG2eQ1;
  const DriftParam psi_param =
      qubit == 0 ? DriftParam::kPsi2qQ0 : DriftParam::kPsi2qQ1;
  double g2e = 1.0 + value(g2e_param, t);
  if (g2e < config_.g2e_floor) {
    g2e = config_.g2e_floor;
    ++clamp_events_;
  }
  return {g2e, value(psi_param, t)};
}

}  // namespace qesc
