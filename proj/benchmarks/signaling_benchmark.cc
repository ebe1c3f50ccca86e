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

#include <vector>

#include "benchmark/benchmark.h"
#include "sigauction/model.h"
#include "sigauction/random.h"
#include "sigauction/signaling.h"

namespace sigauction {
namespace {

std::vector<double> Valuations(int n) {
  Rng rng(n);
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform01();
  return v;
}

void BM_AssignFullDisclosure(benchmark::State& state) {
  const auto v = Valuations(static_cast<int>(state.range(0)));
  const auto s = DisclosureStrategy::FullDisclosure();
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(AssignSignals(s, v, rng));
}
BENCHMARK(BM_AssignFullDisclosure)->Arg(10)->Arg(100)->Arg(1000);

void BM_AssignPoolHighAverage(benchmark::State& state) {
  const auto v = Valuations(static_cast<int>(state.range(0)));
  const auto s =
      DisclosureStrategy::PoolHigh(0.4, PooledInfo::kTierWithAverage);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(AssignSignals(s, v, rng));
}
BENCHMARK(BM_AssignPoolHighAverage)->Arg(10)->Arg(100)->Arg(1000);

void BM_AssignRandomized(benchmark::State& state) {
  const auto v = Valuations(static_cast<int>(state.range(0)));
  const auto s = DisclosureStrategy::Randomized(0.5);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(AssignSignals(s, v, rng));
}
BENCHMARK(BM_AssignRandomized)->Arg(10)->Arg(100)->Arg(1000);

void BM_RenderPrivateMessage(benchmark::State& state) {
  const auto v = Valuations(10);
  const auto s =
      DisclosureStrategy::PoolHigh(0.2, PooledInfo::kTierWithAverage);
  Rng rng(1);
  const auto a = AssignSignals(s, v, rng);
  for (auto _ : state) {
    for (const auto& signal : a.signals) {
      benchmark::DoNotOptimize(RenderPrivateMessage(signal));
    }
  }
}
BENCHMARK(BM_RenderPrivateMessage);

}  // namespace
}  // namespace sigauction
