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

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>

namespace qesc {

// SplitMix64 finalizer; avalanches every input bit across the output.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic sub-stream seed from a (seed, stream id) pair. Chaining calls
// derives a whole tree of decorrelated streams from one master seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x51ed2701a1b1ull));
}

inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = seed;
  for (std::uint64_t p : path) s = derive_seed(s, p);
  return s;
}

// All randomness flows through this wrapper. The engine is mt19937_64, which
// the C++ standard pins bit-exactly; the samplers below are built directly on
// its 64-bit output because std::*_distribution algorithms are
// implementation-defined and would break byte-identical reruns across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  Rng split(std::uint64_t stream) const {
    return Rng(derive_seed(seed_, stream));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; two uniforms per sample, no caching, so
  // the draw count per call is fixed.
  double gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double gaussian(double mean, double sigma) {
    return mean + sigma * gaussian();
  }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    const int k = static_cast<int>(uniform() * n);
    return k < n ? k : n - 1;
  }

  // Index sampled from an unnormalized weight vector by inverse CDF.
  std::size_t sample_discrete(std::span<const double> weights) {
    if (weights.empty())
      throw std::invalid_argument("sample_discrete: empty weights");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0))
        throw std::invalid_argument("sample_discrete: negative weight");
      total += w;
    }
    if (total <= 0.0)
      throw std::invalid_argument("sample_discrete: zero total weight");
    const double target = uniform() * total;
    double cdf = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cdf += weights[i];
      if (target < cdf) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace qesc
