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

// Experiment grid expansion, execution and persistence.
//
// Output layout of a run directory:
//   <config_id>.jsonl   one RoundRecord per line, in round order
//   summary.csv         one row per cell (see SummaryCsvColumns())
//   manifest.json       config echo, seeds, version, per-cell checksums

#ifndef SIGAUCTION_EXPERIMENT_H_
#define SIGAUCTION_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigauction/agents.h"
#include "sigauction/auction.h"
#include "sigauction/llm_client.h"
#include "sigauction/metrics.h"
#include "sigauction/model.h"
#include "sigauction/pipeline.h"

namespace sigauction {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.3.0";

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::uint64_t experiment_seed = 0;
  int n_bidders = 10;
  int rounds_per_config = 100;
  ValuePrior prior;
  std::vector<DisclosureStrategy> strategies;
  std::vector<BackendSpec> backends;
  TieRule tie_rule = TieRule::kLowestIndex;
  std::filesystem::path output_dir = "out";
  std::optional<LlmConfig> llm;
  // Unset: enabled exactly when every backend is analytic.
  std::optional<bool> common_random_numbers;
  double truthful_eps = kDefaultTruthfulEps;
  // Round-level worker threads; 0 means hardware concurrency.
  int workers = 0;

  bool uses_llm() const;
  bool crn_enabled() const;
  // Throws ConfigError naming the offending key.
  void Validate() const;
};

// Full disclosure, PoolHigh and PoolLow at d in {0.2, 0.4, 0.6, 0.8} with
// both pooled-information variants, and Randomized at the same d: 21 maps.
std::vector<DisclosureStrategy> PaperDefaultStrategies();

// Parses a JSON config document. Throws ConfigError whose message starts
// with the offending key path (e.g. "strategies[2].pooled_info: ...").
ExperimentConfig ParseExperimentConfig(std::string_view json_text);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

// Canonical JSON echo of a config (used in manifests and by `validate`).
std::string ConfigToJson(const ExperimentConfig& config);

struct GridCell {
  std::string config_id;
  DisclosureStrategy strategy;
  BackendSpec backend;
  SummaryLabel label;
};

struct GridExpansion {
  std::vector<GridCell> cells;
  std::vector<std::string> warnings;
};

// Readable slug of a cell's parameters, e.g.
// "pool_high-d0.2-tier_only-scripted_paper".
std::string ConfigId(const DisclosureStrategy& strategy,
                     const BackendSpec& backend);

// Ordered product strategies x backends; duplicate cells are dropped with a
// warning. Throws ConfigError for an empty strategy or backend list.
GridExpansion ExpandGrid(const ExperimentConfig& config);

// StableHash(experiment_seed, config_id, round_index).
std::uint64_t RoundSeed(std::uint64_t experiment_seed,
                        std::string_view config_id, int round_index);

// With common random numbers valuations depend only on (experiment seed,
// round index), so every cell sees the same valuation vectors.
std::uint64_t ValuationSeed(std::uint64_t experiment_seed,
                            std::uint64_t round_seed, int round_index,
                            bool common_random_numbers);

RoundConfig MakeRoundConfig(const ExperimentConfig& config,
                            const GridCell& cell, int round_index);

struct CellReport {
  GridCell cell;
  std::filesystem::path file;
  std::string checksum;
  std::int64_t records = 0;
  MetricsSummary summary;
  bool resumed = false;
};

struct RunManifest {
  std::filesystem::path output_dir;
  std::vector<CellReport> cells;
  std::filesystem::path summary_csv;
  std::filesystem::path manifest_json;

  bool any_failed() const;
};

struct RunOptions {
  // Overrides LlmClient::FromEnvironment for llm backends.
  std::shared_ptr<const LlmClient> llm_client;
  // Called after each cell completes, in grid order.
  std::function<void(const CellReport&)> on_cell;
};

// Runs every cell, writing outputs into config.output_dir. Cells whose JSONL
// file is complete and matches the checksum in an existing manifest for the
// same configuration are reused rather than re-run.
//
// Throws IoError before any round if the output directory is not writable,
// ConfigError if the config is invalid or an llm backend has no API key.
RunManifest RunExperiment(const ExperimentConfig& config,
                          const RunOptions& options = {});

enum class GroupBy { kThreshold, kStrategy };
GroupBy ParseGroupBy(std::string_view text);

// Re-aggregates a finished run directory from its JSONL files.
// kThreshold yields one row per cell; kStrategy pools every disclosure
// fraction of a (strategy, pooled_info, backend) combination into one row.
// Throws IoError if the manifest is missing and ValidationError on a
// checksum mismatch.
std::vector<MetricsSummary> ReportFromDirectory(
    const std::filesystem::path& dir, GroupBy group_by);

}  // namespace sigauction

#endif  // SIGAUCTION_EXPERIMENT_H_
