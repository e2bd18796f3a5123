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

#include <string>
#include <variant>
#include <vector>

#include "qesc/gates.hpp"
#include "qesc/rng.hpp"

namespace qesc {

struct SingleQubitGate {
  int qubit = 0;
  double theta = 0.0;
  double phi = 0.0;
};

// One or more single-qubit rotations applied simultaneously, at most one per
// qubit.
struct SingleQubitLayer {
  std::vector<SingleQubitGate> gates;
};

// Entangling layer on both qubits of a two-qubit register.
struct MsLayer {
  double chi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

// Fixed unitary executed verbatim; noise maps leave it untouched.
struct PerfectLayer {
  Eigen::Matrix4cd unitary;
};

using Layer = std::variant<SingleQubitLayer, MsLayer, PerfectLayer>;

struct Circuit {
  int n_qubits = 2;
  std::vector<Layer> layers;
};

// Qubit 0 is the most significant bit: basis index 2 of a two-qubit register
// is "10", i.e. qubit 0 in |1>.
std::string outcome_label(int n_qubits, int index);

Eigen::VectorXcd basis_state(int n_qubits, int index);

// Throws std::invalid_argument on out-of-range targets, duplicate targets
// within a layer, or entangling/perfect layers in a register that is not
// two qubits.
void validate_circuit(const Circuit& circuit);

Eigen::MatrixXcd layer_unitary(const Layer& layer, int n_qubits);

// Product of all layer unitaries, last layer leftmost.
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit);

Eigen::VectorXcd apply_circuit(const Circuit& circuit, Eigen::VectorXcd state);

bool is_normalized(const Eigen::VectorXcd& state, double tol = 1e-10);

// Computational-basis counts (size 2^n, summing to shots) sampled from the
// Born probabilities of state.
std::vector<int> sample_measurements(const Eigen::VectorXcd& state, int shots,
                                     Rng& rng);

}  // namespace qesc
