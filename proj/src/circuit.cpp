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

#include "qesc/circuit.hpp"

#include <algorithm>
#include <stdexcept>

namespace qesc {

namespace {

int dimension(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 2)
    throw std::invalid_argument("circuit: register must hold 1 or 2 qubits");
  return 1 << n_qubits;
}

void validate_layer(const Layer& layer, int n_qubits) {
  if (const auto* single = std::get_if<SingleQubitLayer>(&layer)) {
    if (single->gates.empty())
      throw std::invalid_argument("circuit: empty single-qubit layer");
    std::vector<bool> used(n_qubits, false);
    for (const SingleQubitGate& gate : single->gates) {
      if (gate.qubit < 0 || gate.qubit >= n_qubits)
        throw std::invalid_argument("circuit: gate targets missing qubit");
      if (used[gate.qubit])
        throw std::invalid_argument(
            "circuit: two gates on one qubit in a single layer");
      used[gate.qubit] = true;
    }
  } else if (n_qubits != 2) {
    throw std::invalid_argument(
        "circuit: entangling and perfect layers need a two-qubit register");
  }
}

}  // namespace

std::string outcome_label(int n_qubits, int index) {
  const int dim = dimension(n_qubits);
  if (index < 0 || index >= dim)
    throw std::out_of_range("outcome_label: index outside register");
  std::string label(n_qubits, '0');
  for (int q = 0; q < n_qubits; ++q)
    if (index >> (n_qubits - 1 - q) & 1) label[q] = '1';
  return label;
}

Eigen::VectorXcd basis_state(int n_qubits, int index) {
  const int dim = dimension(n_qubits);
  if (index < 0 || index >= dim)
    throw std::out_of_range("basis_state: index outside register");
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim);
  state(index) = 1.0;
  return state;
}

void validate_circuit(const Circuit& circuit) {
  dimension(circuit.n_qubits);
  for (const Layer& layer : circuit.layers)
    validate_layer(layer, circuit.n_qubits);
}

Eigen::MatrixXcd layer_unitary(const Layer& layer, int n_qubits) {
  dimension(n_qubits);
  validate_layer(layer, n_qubits);
  if (const auto* single = std::get_if<SingleQubitLayer>(&layer)) {
    std::vector<Matrix2c<double>> factors(n_qubits,
                                          Matrix2c<double>::Identity());
    for (const SingleQubitGate& gate : single->gates)
      factors[gate.qubit] = rot_gate(gate.theta, gate.phi);
    Eigen::MatrixXcd u = factors[0];
    for (int q = 1; q < n_qubits; ++q) u = kron(u, factors[q]);
    return u;
  }
  if (const auto* ms = std::get_if<MsLayer>(&layer))
    return ms_gate(ms->chi, ms->phi1, ms->phi2);
  return std::get<PerfectLayer>(layer).unitary;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
  const int dim = dimension(circuit.n_qubits);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const Layer& layer : circuit.layers)
    u = layer_unitary(layer, circuit.n_qubits) * u;
  return u;
}

Eigen::VectorXcd apply_circuit(const Circuit& circuit, Eigen::VectorXcd state) {
  const int dim = dimension(circuit.n_qubits);
  if (state.size() != dim)
    throw std::invalid_argument("apply_circuit: state dimension mismatch");
  for (const Layer& layer : circuit.layers)
    state = layer_unitary(layer, circuit.n_qubits) * state;
  return state;
}

bool is_normalized(const Eigen::VectorXcd& state, double tol) {
  return std::abs(state.squaredNorm() - 1.0) <= tol;
}

std::vector<int> sample_measurements(const Eigen::VectorXcd& state, int shots,
                                     Rng& rng) {
  if (shots < 0) throw std::invalid_argument("sample_measurements: shots < 0");
  if (!is_normalized(state, 1e-8))
    throw std::invalid_argument("sample_measurements: state not normalized");
  const Eigen::VectorXd probs = state.cwiseAbs2();
  std::vector<double> weights(probs.data(), probs.data() + probs.size());
  std::vector<int> counts(weights.size(), 0);
  for (int s = 0; s < shots; ++s) ++counts[rng.sample_discrete(weights)];
  return counts;
}

}  // namespace qesc
