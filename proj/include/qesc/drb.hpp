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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qesc/circuit.hpp"

namespace qesc {

inline constexpr double kSingleQubitLayerSeconds = 90e-6;
inline constexpr double kTwoQubitLayerSeconds = 700e-6;

// kPerfect appends the exact inverse of the sampled circuit as a noise-exempt
// layer. kMirror appends the reversed sequence of native inverse gates
// (R(theta, phi+pi), MS(chi, phi1+pi, phi2)), which the plant executes
// noisily like any other layer.
enum class InversionMode { kPerfect, kMirror };

struct DrbDesign {
  std::vector<int> depths = {1, 32, 128};
  int circuits_per_depth = 5;
  int shots_per_circuit = 18;
  double two_qubit_fraction = 0.75;
  InversionMode inversion = InversionMode::kPerfect;
  double per_shot_overhead_seconds = 0.0;
  std::uint64_t seed = 0;
};

void validate_design(const DrbDesign& design);

struct DecayFit {
  double p = 0.0;
  double amplitude = 0.0;
  double p_std_error = 0.0;
  // Set when the fit hit the [0, 1] boundary or the data could not
  // distinguish decay rates.
  bool low_confidence = false;
};

struct DrbEstimate {
  DecayFit fit;
  double objective = 0.0;  // the fitted p, fed to the optimizer
  std::vector<int> depths;
  std::vector<double> depth_means;      // mean success fraction per depth
  std::vector<double> depth_variances;  // variance of that mean
};

// Executed-circuit model: maps the ideal circuit to what actually runs at
// time t.
using NoisyPlant = std::function<Circuit(const Circuit&, double)>;

NoisyPlant identity_plant();

// d core layers (two-qubit with probability two_qubit_fraction, otherwise
// simultaneous single-qubit rotations with random axes), then the inversion
// layer. The sampled gates are native: MS(pi/2, phi1, phi2) with
// phi_i in {0, pi/2} and R(pi/2, phi) with phi in {0, pi/2, pi, 3pi/2}.
Circuit sample_drb_circuit(const DrbDesign& design, int depth, Rng& rng);

// Fit S(d) = amplitude * p^d + 1/4 by least squares on the per-depth means.
// variances weight the standard error propagation; a two-point dataset uses
// the closed form p = (z2/z1)^(1/(d2-d1)).
DecayFit fit_decay(std::span<const int> depths, std::span<const double> means,
                   std::span<const double> variances);

// Runs the whole design through the plant at time t: per-circuit seeds are
// derived from (design.seed, depth, circuit index), each covering that
// circuit's sampling and its measurement shots, so results do not depend on
// execution order. Success is the fraction of "00" outcomes.
DrbEstimate run_drb(const DrbDesign& design, const NoisyPlant& plant,
                    double t);

// Wall-clock cost model: per (circuit, shot), depth d costs
// d * (f * t_2q + (1-f) * t_1q) + overhead; a mirror inversion doubles the
// executed layer count.
double drb_runtime_seconds(const DrbDesign& design, std::int64_t n_evals = 1);

// r = (1 - p)(4^n - 1)/4^n for an n-qubit register.
double error_rate_from_p(double p, int n_qubits = 2);

}  // namespace qesc
