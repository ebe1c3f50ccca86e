// Copyright 2026 The sigauction Authors
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

#ifndef SIGAUCTION_RANDOM_H_
#define SIGAUCTION_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace sigauction {

// Portable seeded random source.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are implemented here rather than with the
// <random> distribution templates, whose algorithms are
// implementation-defined, so that every draw is identical across standard
// libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform01();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);

  // Unbiased uniform integer in [0, bound). bound must be > 0.
  std::uint64_t UniformIndex(std::uint64_t bound);

  // True with probability p. p <= 0 never fires, p >= 1 always fires.
  bool Bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a over raw bytes.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// The SplitMix64 finalizer; a bijective avalanche mix.
std::uint64_t Mix64(std::uint64_t x);

// Stable 64-bit seed derivation, fixed across versions:
//   Mix64(Fnv1a64(le64(base) || label || 0x00 || le64(index)))
// Used for per-round seeds (base = experiment seed, label = config id,
// index = round index) and for the derived per-phase streams of a round.
std::uint64_t StableHash(std::uint64_t base, std::string_view label,
                         std::uint64_t index);

}  // namespace sigauction

#endif  // SIGAUCTION_RANDOM_H_
