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

#include "sigauction/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "sigauction/error.h"
#include "sigauction/format.h"

namespace sigauction {
namespace {

constexpr std::array<std::string_view, 15> kColumns = {
    "config_id",    "strategy",     "disclosure_fraction", "pooled_info",
    "backend",      "rounds_ok",    "rounds_failed",       "mean_revenue",
    "sum_revenue",  "mean_welfare", "sum_welfare",         "pct_truthful",
    "pct_over",     "pct_under",    "bid_count",
};

MetricsSummary Fold(std::span<const RoundRecord> records, SummaryLabel label,
                    double eps) {
  MetricsSummary s;
  s.label = std::move(label);
  std::vector<double> revenues;
  std::vector<double> welfares;
  std::int64_t over = 0;
  std::int64_t truthful = 0;
  std::int64_t under = 0;
  for (const RoundRecord& rec : records) {
    if (!rec.ok()) {
      ++s.rounds_failed;
      continue;
    }
    ++s.rounds_ok;
    revenues.push_back(*RoundRevenue(rec));
    welfares.push_back(*RoundWelfare(rec));
    for (const BidResponse& r : rec.responses) {
      switch (ClassifyBid(r.bid, r.estimated_value, eps)) {
        case DeviationClass::kOver:
          ++over;
          break;
        case DeviationClass::kTruthful:
          ++truthful;
          break;
        case DeviationClass::kUnder:
          ++under;
          break;
      }
    }
  }
  s.bid_count = over + truthful + under;
  s.sum_revenue = OrderInvariantSum(std::move(revenues));
  s.sum_welfare = OrderInvariantSum(std::move(welfares));
  if (s.rounds_ok > 0) {
    const double rounds = static_cast<double>(s.rounds_ok);
    s.mean_revenue = s.sum_revenue / rounds;
    s.mean_welfare = s.sum_welfare / rounds;
  }
  if (s.bid_count > 0) {
    const double bids = static_cast<double>(s.bid_count);
    s.pct_truthful = 100.0 * static_cast<double>(truthful) / bids;
    s.pct_over = 100.0 * static_cast<double>(over) / bids;
    s.pct_under = 100.0 * static_cast<double>(under) / bids;
  }
  return s;
}

}  // namespace

DeviationClass ClassifyBid(double bid, double estimate, double eps) {
  const double diff = bid - estimate;
  if (std::abs(diff) <= eps) return DeviationClass::kTruthful;
  return diff > 0 ? DeviationClass::kOver : DeviationClass::kUnder;
}

std::optional<double> RoundRevenue(const RoundRecord& record) {
  if (!record.ok()) return std::nullopt;
  return record.outcome->price;
}

std::optional<double> RoundWelfare(const RoundRecord& record) {
  if (!record.ok()) return std::nullopt;
  return record.valuations.at(record.outcome->winner.index);
}

double OrderInvariantSum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

MetricsSummary AggregateCell(std::span<const RoundRecord> records,
                             SummaryLabel label, double eps) {
  for (const RoundRecord& rec : records) {
    if (rec.config_id != records.front().config_id) {
      throw ValidationError("records from configs '" +
                            records.front().config_id + "' and '" +
                            rec.config_id + "' cannot be aggregated as a cell");
    }
  }
  return Fold(records, std::move(label), eps);
}

MetricsSummary AggregatePooled(std::span<const RoundRecord> records,
                               SummaryLabel label, double eps) {
  return Fold(records, std::move(label), eps);
}

std::span<const std::string_view> SummaryCsvColumns() { return kColumns; }

void WriteSummaryCsv(std::ostream& out, std::span<const MetricsSummary> rows) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    out << (i ? "," : "") << kColumns[i];
  }
  out << '\n';
  for (const MetricsSummary& s : rows) {
    auto metric = [&](double v) {
      return s.empty() ? std::string() : FormatDouble(v);
    };
    out << s.label.config_id << ',' << s.label.strategy << ','
        << (s.label.disclosure_fraction
                ? FormatDouble(*s.label.disclosure_fraction)
                : std::string())
        << ',' << s.label.pooled_info << ',' << s.label.backend << ','
        << s.rounds_ok << ',' << s.rounds_failed << ','
        << metric(s.mean_revenue) << ',' << FormatDouble(s.sum_revenue) << ','
        << metric(s.mean_welfare) << ',' << FormatDouble(s.sum_welfare) << ','
        << metric(s.pct_truthful) << ',' << metric(s.pct_over) << ','
        << metric(s.pct_under) << ',' << s.bid_count << '\n';
  }
}

}  // namespace sigauction
