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

#ifndef SIGAUCTION_METRICS_H_
#define SIGAUCTION_METRICS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigauction/model.h"

namespace sigauction {

inline constexpr double kDefaultTruthfulEps = 1e-9;

enum class DeviationClass { kOver, kTruthful, kUnder };

// |bid - estimate| <= eps is truthful; otherwise over or under.
DeviationClass ClassifyBid(double bid, double estimate,
                           double eps = kDefaultTruthfulEps);

// Price paid by the winner; nullopt for a failed round.
std::optional<double> RoundRevenue(const RoundRecord& record);

// True valuation of the winner; nullopt for a failed round.
std::optional<double> RoundWelfare(const RoundRecord& record);

// Sum of `values` that does not depend on their order: values are summed
// in ascending order with Neumaier compensation.
double OrderInvariantSum(std::vector<double> values);

// Descriptive columns of a summary row.
struct SummaryLabel {
  std::string config_id;
  std::string strategy;
  std::optional<double> disclosure_fraction;  // unset for pooled rows
  std::string pooled_info;
  std::string backend;
};

struct MetricsSummary {
  SummaryLabel label;
  std::int64_t rounds_ok = 0;
  std::int64_t rounds_failed = 0;
  double mean_revenue = 0.0;
  double sum_revenue = 0.0;
  double mean_welfare = 0.0;
  double sum_welfare = 0.0;
  double pct_truthful = 0.0;
  double pct_over = 0.0;
  double pct_under = 0.0;
  std::int64_t bid_count = 0;

  // No successful round: means and percentages are undefined and written
  // as empty CSV fields.
  bool empty() const { return rounds_ok == 0; }
};

// Aggregates the records of one grid cell. Means run over successful
// rounds, deviation percentages over every bid of successful rounds.
// Throws ValidationError if the records do not share one config_id.
MetricsSummary AggregateCell(std::span<const RoundRecord> records,
                             SummaryLabel label,
                             double eps = kDefaultTruthfulEps);

// Aggregates records from several cells into one row (e.g. all thresholds
// of a strategy).
MetricsSummary AggregatePooled(std::span<const RoundRecord> records,
                               SummaryLabel label,
                               double eps = kDefaultTruthfulEps);

// Column order of summary.csv.
std::span<const std::string_view> SummaryCsvColumns();

void WriteSummaryCsv(std::ostream& out,
                     std::span<const MetricsSummary> rows);

}  // namespace sigauction

#endif  // SIGAUCTION_METRICS_H_
