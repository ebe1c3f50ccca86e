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

#include "benchmark/benchmark.h"
#include "sigauction/agents.h"
#include "sigauction/model.h"
#include "sigauction/pipeline.h"

namespace sigauction {
namespace {

RoundConfig Config(BackendKind kind, const DisclosureStrategy& strategy) {
  RoundConfig rc;
  rc.config_id = "bench";
  rc.strategy = strategy;
  rc.backend.kind = kind;
  return rc;
}

void RunRounds(benchmark::State& state, RoundConfig rc) {
  for (auto _ : state) {
    rc.round_seed = rc.valuation_seed = ++rc.round_index;
    benchmark::DoNotOptimize(RunRound(rc));
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_RoundOracleFullDisclosure(benchmark::State& state) {
  RunRounds(state, Config(BackendKind::kOracleTruthful,
                          DisclosureStrategy::FullDisclosure()));
}
BENCHMARK(BM_RoundOracleFullDisclosure);

void BM_RoundScriptedPoolHigh(benchmark::State& state) {
  RunRounds(state,
            Config(BackendKind::kScriptedPaper,
                   DisclosureStrategy::PoolHigh(0.2, PooledInfo::kTierOnly)));
}
BENCHMARK(BM_RoundScriptedPoolHigh);

void BM_RoundRationalBayesPoolLow(benchmark::State& state) {
  RunRounds(state, Config(BackendKind::kRationalBayes,
                          DisclosureStrategy::PoolLow(
                              0.6, PooledInfo::kTierWithAverage)));
}
BENCHMARK(BM_RoundRationalBayesPoolLow);

}  // namespace
}  // namespace sigauction
