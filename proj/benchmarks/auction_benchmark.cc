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
#include "sigauction/auction.h"
#include "sigauction/random.h"

namespace sigauction {
namespace {

std::vector<SealedBid> Bids(int n, bool tied) {
  Rng rng(n);
  std::vector<SealedBid> bids;
  for (int i = 0; i < n; ++i) {
    bids.push_back({BidderId{i}, tied ? 0.5 : rng.Uniform01()});
  }
  return bids;
}

void BM_SecondPriceLowestIndex(benchmark::State& state) {
  const auto bids = Bids(static_cast<int>(state.range(0)), false);
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RunSecondPrice(bids, TieRule::kLowestIndex, rng));
  }
}
BENCHMARK(BM_SecondPriceLowestIndex)->Arg(10)->Arg(100)->Arg(1000);

void BM_SecondPriceSeededRandomAllTied(benchmark::State& state) {
  const auto bids = Bids(static_cast<int>(state.range(0)), true);
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RunSecondPrice(bids, TieRule::kSeededRandom, rng));
  }
}
BENCHMARK(BM_SecondPriceSeededRandomAllTied)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace
}  // namespace sigauction
