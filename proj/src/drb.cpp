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

#include "qesc/drb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qesc {

namespace {

constexpr double kAsymptote = 0.25;
constexpr double kPMax = 1.1;  // search past 1 so boundary hits are visible

struct SeparableFit {
  double amplitude = 0.0;
  double sse = 0.0;
};

// For fixed p the amplitude minimizing sum (z_j - A p^d_j)^2 is closed form.
SeparableFit amplitude_for(double p, std::span<const int> depths,
                           std::span<const double> z) {
  double xz = 0.0, xx = 0.0;
  for (std::size_t j = 0; j < depths.size(); ++j) {
    const double x = std::pow(p, depths[j]);
    xz += x * z[j];
    xx += x * x;
  }
  SeparableFit fit;
  fit.amplitude = xx > 0.0 ? xz / xx : 0.0;
  for (std::size_t j = 0; j < depths.size(); ++j) {
    const double r = z[j] - fit.amplitude * std::pow(p, depths[j]);
    fit.sse += r * r;
  }
  return fit;
}

double golden_refine(double lo, double hi, std::span<const int> depths,
                     std::span<const double> z) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = amplitude_for(x1, depths, z).sse;
  double f2 = amplitude_for(x2, depths, z).sse;
  while (b - a > 1e-12) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = amplitude_for(x1, depths, z).sse;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = amplitude_for(x2, depths, z).sse;
    }
  }
  return (a + b) / 2;
}

// Global scan plus local refinement; SSE(p) is cheap and low-dimensional, so
// brute force beats fragile Newton steps here.
double minimize_sse(std::span<const int> depths, std::span<const double> z) {
  constexpr int kGridPoints = 1101;
  double best_p = 0.0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridPoints; ++i) {
    const double p = kPMax * i / (kGridPoints - 1);
    const double sse = amplitude_for(p, depths, z).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_p = p;
    }
  }
  const double step = kPMax / (kGridPoints - 1);
  const double lo = std::max(0.0, best_p - step);
  const double hi = std::min(kPMax, best_p + step);
  return golden_refine(lo, hi, depths, z);
}

double fit_point_estimate(std::span<const int> depths,
                          std::span<const double> z) {
  if (depths.size() == 2 && z[0] > 0.0 && z[1] > 0.0) {
    const double p =
        std::pow(z[1] / z[0], 1.0 / (depths[1] - depths[0]));
    if (p <= kPMax) return p;
    return kPMax;
  }
  return minimize_sse(depths, z);
}

}  // namespace

void validate_design(const DrbDesign& design) {
  if (design.depths.size() < 2)
    throw std::invalid_argument("drb: need at least two depths");
  for (std::size_t j = 0; j < design.depths.size(); ++j) {
    if (design.depths[j] < 1)
      throw std::invalid_argument("drb: depths must be >= 1");
    if (j > 0 && design.depths[j] <= design.depths[j - 1])
      throw std::invalid_argument("drb: depths must be strictly increasing");
  }
  if (design.circuits_per_depth < 1)
    throw std::invalid_argument("drb: circuits_per_depth must be >= 1");
  if (design.shots_per_circuit < 1)
    throw std::invalid_argument("drb: shots_per_circuit must be >= 1");
  if (!(design.two_qubit_fraction >= 0.0 && design.two_qubit_fraction <= 1.0))
    throw std::invalid_argument("drb: two_qubit_fraction must be in [0, 1]");
  if (!(design.per_shot_overhead_seconds >= 0.0))
    throw std::invalid_argument("drb: per_shot_overhead_seconds must be >= 0");
}

NoisyPlant identity_plant() {
  return [](const Circuit& circuit, double) { return circuit; };
}

Circuit sample_drb_circuit(const DrbDesign& design, int depth, Rng& rng) {
  if (depth < 1) throw std::invalid_argument("drb: depth must be >= 1");
  constexpr double kHalfPi = std::numbers::pi / 2;
  Circuit circuit;
  circuit.layers.reserve(depth + 1);
  for (int d = 0; d < depth; ++d) {
    if (rng.uniform() < design.two_qubit_fraction) {
      MsLayer ms;
      ms.chi = kHalfPi;
      ms.phi1 = kHalfPi * rng.uniform_int(2);
      ms.phi2 = kHalfPi * rng.uniform_int(2);
      circuit.layers.emplace_back(ms);
    } else {
      SingleQubitLayer layer;
      layer.gates.push_back({0, kHalfPi, kHalfPi * rng.uniform_int(4)});
      layer.gates.push_back({1, kHalfPi, kHalfPi * rng.uniform_int(4)});
      circuit.layers.emplace_back(layer);
    }
  }
  if (design.inversion == InversionMode::kPerfect) {
    const Eigen::Matrix4cd u = circuit_unitary(circuit);
    circuit.layers.emplace_back(PerfectLayer{u.adjoint()});
  } else {
    const int core = static_cast<int>(circuit.layers.size());
    constexpr double kPi = std::numbers::pi;
    for (int d = core - 1; d >= 0; --d) {
      if (const auto* ms = std::get_if<MsLayer>(&circuit.layers[d])) {
        circuit.layers.emplace_back(MsLayer{ms->chi, ms->phi1 + kPi, ms->phi2});
      } else {
        SingleQubitLayer inverse;
        for (const SingleQubitGate& gate :
             std::get<SingleQubitLayer>(circuit.layers[d]).gates)
          inverse.gates.push_back({gate.qubit, gate.theta, gate.phi + kPi});
        circuit.layers.emplace_back(inverse);
      }
    }
  }
  return circuit;
}

DrbEstimate run_drb(const DrbDesign& design, const NoisyPlant& plant,
                    double t) {
  validate_design(design);
  const Eigen::VectorXcd initial = basis_state(2, 0);
  DrbEstimate estimate;
  estimate.depths = design.depths;
  for (int depth : design.depths) {
    double sum = 0.0, sum_sq = 0.0;
    for (int c = 0; c < design.circuits_per_depth; ++c) {
      Rng rng(derive_seed(design.seed, {static_cast<std::uint64_t>(depth),
                                        static_cast<std::uint64_t>(c)}));
      const Circuit ideal = sample_drb_circuit(design, depth, rng);
      const Circuit executed = plant(ideal, t);
      const Eigen::VectorXcd final_state = apply_circuit(executed, initial);
      const std::vector<int> counts =
          sample_measurements(final_state, design.shots_per_circuit, rng);
      const double success =
          static_cast<double>(counts[0]) / design.shots_per_circuit;
      sum += success;
      sum_sq += success * success;
    }
    const int n_circuits = design.circuits_per_depth;
    const int n_shots = n_circuits * design.shots_per_circuit;
    const double mean = sum / n_circuits;
    double var_mean = 0.0;
    if (n_circuits > 1) {
      const double var =
          (sum_sq - n_circuits * mean * mean) / (n_circuits - 1);
      var_mean = std::max(var, 0.0) / n_circuits;
    }
    // Smoothed binomial floor keeps the variance positive when every shot
    // agrees.
    const double smoothed = (mean * n_shots + 1.0) / (n_shots + 2.0);
    var_mean = std::max(var_mean, smoothed * (1.0 - smoothed) / n_shots);
    estimate.depth_means.push_back(mean);
    estimate.depth_variances.push_back(var_mean);
  }
  estimate.fit =
      fit_decay(estimate.depths, estimate.depth_means, estimate.depth_variances);
  estimate.objective = estimate.fit.p;
  return estimate;
}

DecayFit fit_decay(std::span<const int> depths, std::span<const double> means,
                   std::span<const double> variances) {
  const std::size_t n = depths.size();
  if (n < 2) throw std::invalid_argument("fit_decay: need at least two depths");
  if (means.size() != n || variances.size() != n)
    throw std::invalid_argument("fit_decay: size mismatch");
  for (std::size_t j = 1; j < n; ++j)
    if (depths[j] <= depths[j - 1])
      throw std::invalid_argument("fit_decay: depths must increase");

  std::vector<double> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = means[j] - kAsymptote;

  DecayFit fit;
  double p = fit_point_estimate(depths, z);
  fit.amplitude = amplitude_for(p, depths, z).amplitude;

  // A flat or boundary solution means the data cannot pin the decay rate.
  double max_abs_z = 0.0, max_sigma = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    max_abs_z = std::max(max_abs_z, std::abs(z[j]));
    max_sigma = std::max(max_sigma, std::sqrt(std::max(variances[j], 0.0)));
  }
  if (p > 1.0) {
    if (p > 1.0 + 1e-9) fit.low_confidence = true;
    p = 1.0;
  }
  if (max_abs_z < 2.0 * max_sigma || fit.amplitude < 0.05)
    fit.low_confidence = true;
  fit.p = p;

  // Standard error by refitting with each depth mean nudged by its own sigma.
  double se_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double sigma = std::sqrt(std::max(variances[j], 0.0));
    if (sigma == 0.0) continue;
    std::vector<double> z_hi(z), z_lo(z);
    z_hi[j] += sigma;
    z_lo[j] -= sigma;
    const double p_hi =
        std::min(fit_point_estimate(depths, z_hi), 1.0);
    const double p_lo =
        std::min(fit_point_estimate(depths, z_lo), 1.0);
    const double dp_dz = (p_hi - p_lo) / (2.0 * sigma);
    se_sq += dp_dz * dp_dz * std::max(variances[j], 0.0);
  }
  fit.p_std_error = std::sqrt(se_sq);
  return fit;
}

double drb_runtime_seconds(const DrbDesign& design, std::int64_t n_evals) {
  validate_design(design);
  if (n_evals < 0) throw std::invalid_argument("drb: n_evals must be >= 0");
  const double layer_seconds =
      design.two_qubit_fraction * kTwoQubitLayerSeconds +
      (1.0 - design.two_qubit_fraction) * kSingleQubitLayerSeconds;
  const int inversion_factor =
      design.inversion == InversionMode::kMirror ? 2 : 1;
  double per_eval = 0.0;
  for (int depth : design.depths) {
    const double per_shot = inversion_factor * depth * layer_seconds +
                            design.per_shot_overhead_seconds;
    per_eval +=
        design.circuits_per_depth * design.shots_per_circuit * per_shot;
  }
  return per_eval * static_cast<double>(n_evals);
}

double error_rate_from_p(double p, int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("error_rate_from_p: n < 1");
  const double dim_sq = std::pow(4.0, n_qubits);
  return (1.0 - p) * (dim_sq - 1.0) / dim_sq;
}

}  // namespace qesc
