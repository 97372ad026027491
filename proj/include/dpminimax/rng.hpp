// Copyright 2026 The dpminimax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPMINIMAX_RNG_HPP_
#define DPMINIMAX_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace dpmm {

// Deterministic random source. std::normal_distribution is
// implementation-defined, so normal deviates are produced with an explicit
// Box-Muller transform; given a seed the whole stream is reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1]; safe as a log() argument.
  double uniform_oc() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal deviate (Box-Muller, one spare cached).
  double normal();

  // Uniform integer in [0, n). Rejection sampling, exactly uniform.
  int below(int n);

  // Derived generator with an independent stream (splitmix64 of seed^stream).
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// m distinct indices drawn uniformly without replacement from {0,...,n-1}.
// m == n returns the identity ordering 0..n-1 so that full-batch reductions
// are bitwise stable across rounds.
std::vector<int> sample_batch(int n, int m, Rng& rng);

}  // namespace dpmm

#endif  // DPMINIMAX_RNG_HPP_
