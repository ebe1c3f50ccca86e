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

#include "sigauction/random.h"

#include <array>
#include <cstring>
#include <string>

namespace sigauction {

double Rng::Uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform01();
}

std::uint64_t Rng::UniformIndex(std::uint64_t bound) {
  // Rejection sampling over the largest multiple of bound.
  const std::uint64_t limit = -bound % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= limit) return x % bound;
  }
}

bool Rng::Bernoulli(double p) {
  // Always consume one draw so stream positions do not depend on p.
  const double u = Uniform01();
  return u < p;
}

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

void AppendLe64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

}  // namespace

std::uint64_t StableHash(std::uint64_t base, std::string_view label,
                         std::uint64_t index) {
  std::string buf;
  buf.reserve(17 + label.size());
  AppendLe64(buf, base);
  buf.append(label);
  buf.push_back('\0');
  AppendLe64(buf, index);
  return Mix64(Fnv1a64(buf));
}

}  // namespace sigauction
