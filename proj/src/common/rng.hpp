// Copyright 2026 The pcgil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PCGIL_COMMON_RNG_HPP_
#define PCGIL_COMMON_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>

namespace pcgil {

// Mixes a base seed with a stream id so independent consumers (level
// generation, weight init, action sampling) never share a sequence.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Portable random source. The engine is std::mt19937_64, whose output is
// fixed by the standard; the std distributions are not, so every mapping to
// ints/reals/normals is done here to keep runs bit-identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Uniform integer in [lo, hi). Requires lo < hi.
  int range(int lo, int hi);

  double normal();

  // Draws index i with probability probs[i]; probs must sum to ~1.
  std::size_t categorical(std::span<const double> probs);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pcgil

#endif  // PCGIL_COMMON_RNG_HPP_
