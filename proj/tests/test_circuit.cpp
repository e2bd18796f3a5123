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
#include <numeric>

#include "doctest.h"
#include "qesc/circuit.hpp"

using namespace qesc;
using std::numbers::pi;

namespace {

Circuit random_circuit(int n_layers, Rng& rng) {
  Circuit circuit;
  for (int i = 0; i < n_layers; ++i) {
    if (rng.uniform() < 0.5) {
      circuit.layers.emplace_back(MsLayer{rng.uniform(0.0, pi),
                                          rng.uniform(0.0, 2 * pi),
                                          rng.uniform(0.0, 2 * pi)});
    } else {
      SingleQubitLayer layer;
      layer.gates.push_back({0, rng.uniform(0.0, pi), rng.uniform(0.0, 2 * pi)});
      layer.gates.push_back({1, rng.uniform(0.0, pi), rng.uniform(0.0, 2 * pi)});
      circuit.layers.emplace_back(layer);
    }
  }
  return circuit;
}

}  // namespace

TEST_CASE("basis labels put qubit 0 in the most significant position") {
  CHECK(outcome_label(2, 0) == "00");
  CHECK(outcome_label(2, 1) == "01");
  CHECK(outcome_label(2, 2) == "10");
  CHECK(outcome_label(2, 3) == "11");
  CHECK(outcome_label(1, 1) == "1");
  CHECK_THROWS_AS(outcome_label(2, 4), std::out_of_range);
  CHECK(basis_state(2, 2)(2) == std::complex<double>(1.0));
}

TEST_CASE("a pi pulse on qubit 0 flips |00> to |10>") {
  Circuit circuit;
  circuit.layers.emplace_back(SingleQubitLayer{{{0, pi, 0.0}}});
  const Eigen::VectorXcd out = apply_circuit(circuit, basis_state(2, 0));
  // Global phase -i on the flipped amplitude.
  CHECK(std::abs(out(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(out(0)) < 1e-12);
  CHECK(std::abs(out(1)) < 1e-12);
  CHECK(std::abs(out(3)) < 1e-12);
  CHECK(std::abs(out(2) - std::complex<double>(0.0, -1.0)) < 1e-12);
}

TEST_CASE("single-qubit layers act on their own qubits") {
  Circuit on_q1;
  on_q1.layers.emplace_back(SingleQubitLayer{{{1, pi, 0.0}}});
  const Eigen::VectorXcd out = apply_circuit(on_q1, basis_state(2, 0));
  CHECK(std::abs(out(1)) == doctest::Approx(1.0).epsilon(1e-12));

  // Simultaneous gates on both qubits factorize.
  Circuit both;
  both.layers.emplace_back(
      SingleQubitLayer{{{0, 0.4, 0.1}, {1, 1.3, 2.0}}});
  const Eigen::MatrixXcd expected =
      kron(rot_gate(0.4, 0.1), rot_gate(1.3, 2.0));
  CHECK((circuit_unitary(both) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("circuit validation rejects malformed layers") {
  Circuit duplicate;
  duplicate.layers.emplace_back(SingleQubitLayer{{{0, 1.0, 0.0}, {0, 2.0, 0.0}}});
  CHECK_THROWS_AS(validate_circuit(duplicate), std::invalid_argument);

  Circuit out_of_range;
  out_of_range.layers.emplace_back(SingleQubitLayer{{{2, 1.0, 0.0}}});
  CHECK_THROWS_AS(validate_circuit(out_of_range), std::invalid_argument);

  Circuit ms_on_one_qubit;
  ms_on_one_qubit.n_qubits = 1;
  ms_on_one_qubit.layers.emplace_back(MsLayer{pi / 2, 0.0, 0.0});
  CHECK_THROWS_AS(validate_circuit(ms_on_one_qubit), std::invalid_argument);

  Circuit empty_layer;
  empty_layer.layers.emplace_back(SingleQubitLayer{});
  CHECK_THROWS_AS(validate_circuit(empty_layer), std::invalid_argument);

  Circuit bad_register;
  bad_register.n_qubits = 3;
  CHECK_THROWS_AS(validate_circuit(bad_register), std::invalid_argument);
}

TEST_CASE("unitary composition matches state application") {
  Rng rng(21);
  const Circuit circuit = random_circuit(40, rng);
  const Eigen::MatrixXcd u = circuit_unitary(circuit);
  CHECK(unitarity_defect(u) < 1e-12);
  Eigen::VectorXcd state = basis_state(2, 1);
  const Eigen::VectorXcd direct = apply_circuit(circuit, state);
  CHECK((u * state - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("deep circuits preserve the norm") {
  Rng rng(22);
  const Circuit circuit = random_circuit(300, rng);
  const Eigen::VectorXcd out = apply_circuit(circuit, basis_state(2, 0));
  CHECK(is_normalized(out, 1e-11));
}

TEST_CASE("perfect layers execute verbatim") {
  Rng rng(23);
  Circuit circuit = random_circuit(10, rng);
  const Eigen::Matrix4cd inverse = circuit_unitary(circuit).adjoint();
  circuit.layers.emplace_back(PerfectLayer{inverse});
  const Eigen::VectorXcd out = apply_circuit(circuit, basis_state(2, 0));
  CHECK(std::abs(out(0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measurement sampling is deterministic and counts add up") {
  const Eigen::Vector4cd state =
      ms_gate(std::numbers::pi / 2, 0.0, 0.0) *
      Eigen::Vector4cd(1.0, 0.0, 0.0, 0.0);
  Rng rng_a(31), rng_b(31);
  const std::vector<int> counts_a = sample_measurements(state, 500, rng_a);
  const std::vector<int> counts_b = sample_measurements(state, 500, rng_b);
  CHECK(counts_a == counts_b);
  CHECK(std::accumulate(counts_a.begin(), counts_a.end(), 0) == 500);
}

TEST_CASE("measurement frequencies follow the Born rule") {
  const Eigen::Vector4cd state =
      ms_gate(std::numbers::pi / 2, 0.0, 0.0) *
      Eigen::Vector4cd(1.0, 0.0, 0.0, 0.0);
  Rng rng(32);
  const int shots = 100000;
  const std::vector<int> counts = sample_measurements(state, shots, rng);
  CHECK(std::abs(counts[0] / double(shots) - 0.5) < 0.01);
  CHECK(counts[1] == 0);
  CHECK(counts[2] == 0);
  CHECK(std::abs(counts[3] / double(shots) - 0.5) < 0.01);
}

TEST_CASE("basis states measure to themselves") {
  Rng rng(33);
  const std::vector<int> counts =
      sample_measurements(basis_state(2, 3), 50, rng);
  CHECK(counts[3] == 50);
}

TEST_CASE("measurement rejects unnormalized states") {
  Rng rng(34);
  Eigen::VectorXcd bad = basis_state(2, 0) * 2.0;
  CHECK_THROWS_AS(sample_measurements(bad, 10, rng), std::invalid_argument);
}
