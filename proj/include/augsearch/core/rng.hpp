// Copyright 2026 The augsearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUGSEARCH_CORE_RNG_HPP
#define AUGSEARCH_CORE_RNG_HPP

#include <cmath>
#include <cstdint>

#include "augsearch/core/error.hpp"

namespace augsearch {

/// Deterministic counter-free RNG (splitmix64). All sampling in the project
/// goes through this class so that results are reproducible bit-for-bit
/// across platforms; the standard <random> distributions are
/// implementation-defined and would break same-seed determinism guarantees.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t nextU64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  int uniformInt(int n) {
    AUGS_REQUIRE(n > 0, "Rng::uniformInt: n must be positive");
    return static_cast<int>(nextU64() % static_cast<std::uint64_t>(n));
  }

  /// Standard normal via Box-Muller (two uniform draws per call).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Derives an independent stream; forking with distinct labels from the
  /// same parent yields decorrelated sequences.
  Rng fork(std::uint64_t label) const {
    std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ULL + label * 0xd1342543de82ef95ULL);
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return Rng(z ^ (z >> 33));
  }

private:
  std::uint64_t state_;
};

}  // namespace augsearch

#endif  // AUGSEARCH_CORE_RNG_HPP
