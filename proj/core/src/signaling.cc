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

#include "sigauction/signaling.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sigauction/error.h"
#include "sigauction/format.h"

namespace sigauction {
namespace {

void ReplaceAll(std::string& text, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Bidder indices ordered by ascending valuation, ties by ascending index.
std::vector<int> RankAscending(std::span<const double> valuations) {
  std::vector<int> order(valuations.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return valuations[a] < valuations[b];
  });
  return order;
}

SignalAssignment AssignTiered(const DisclosureStrategy& strategy,
                              std::span<const double> valuations) {
  const int n = static_cast<int>(valuations.size());
  const int k_disclosed = DisclosedCount(strategy.disclosure_fraction, n);
  const std::vector<int> rank = RankAscending(valuations);

  std::vector<bool> is_pooled(n, false);
  if (strategy.family == StrategyFamily::kPoolHigh) {
    for (int r = k_disclosed; r < n; ++r) is_pooled[rank[r]] = true;
  } else {
    for (int r = 0; r < n - k_disclosed; ++r) is_pooled[rank[r]] = true;
  }

  SignalAssignment out;
  out.signals.resize(n);
  double pooled_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (is_pooled[i]) {
      out.pooled.push_back(BidderId{i});
      pooled_sum += valuations[i];
    } else {
      out.disclosed.push_back(BidderId{i});
      out.signals[i] = ExactSignal{valuations[i]};
    }
  }

  TierSignal tier;
  tier.level = strategy.family == StrategyFamily::kPoolHigh ? TierLevel::kHigh
                                                            : TierLevel::kLow;
  if (strategy.pooled_info == PooledInfo::kTierWithAverage &&
      !out.pooled.empty()) {
    tier.tier_average = pooled_sum / static_cast<double>(out.pooled.size());
  }
  for (BidderId id : out.pooled) out.signals[id.index] = tier;
  return out;
}

}  // namespace

int DisclosedCount(double disclosure_fraction, int n) {
  const int k = static_cast<int>(std::floor(disclosure_fraction * n + 0.5));
  return std::clamp(k, 0, n);
}

SignalAssignment AssignSignals(const DisclosureStrategy& strategy,
                               std::span<const double> valuations, Rng& rng) {
  strategy.Validate();
  if (valuations.size() < 2) {
    throw ConfigError("signaling requires at least 2 bidders");
  }
  const int n = static_cast<int>(valuations.size());

  switch (strategy.family) {
    case StrategyFamily::kFullDisclosure: {
      SignalAssignment out;
      for (int i = 0; i < n; ++i) {
        out.signals.emplace_back(ExactSignal{valuations[i]});
        out.disclosed.push_back(BidderId{i});
      }
      return out;
    }
    case StrategyFamily::kPoolHigh:
    case StrategyFamily::kPoolLow:
      return AssignTiered(strategy, valuations);
    case StrategyFamily::kRandomized: {
      SignalAssignment out;
      for (int i = 0; i < n; ++i) {
        if (rng.Bernoulli(strategy.disclosure_fraction)) {
          out.signals.emplace_back(ExactSignal{valuations[i]});
          out.disclosed.push_back(BidderId{i});
        } else {
          out.signals.emplace_back(NoInfoSignal{});
          out.pooled.push_back(BidderId{i});
        }
      }
      return out;
    }
  }
  throw ConfigError("unhandled strategy family");
}

std::string RenderPrivateMessage(const Signal& signal) {
  if (const auto* exact = std::get_if<ExactSignal>(&signal)) {
    std::string msg(MessageTemplates::kExact);
    ReplaceAll(msg, "{VALUE}", FormatDouble(exact->value));
    return msg;
  }
  if (const auto* tier = std::get_if<TierSignal>(&signal)) {
    std::string msg(MessageTemplates::kTier);
    if (tier->tier_average) {
      msg += MessageTemplates::kTierAverage;
      ReplaceAll(msg, "{TIER AVG VALUE}", FormatDouble(*tier->tier_average));
    }
    ReplaceAll(msg, "{POOL LEVEL}", ToString(tier->level));
    return msg;
  }
  return std::string(MessageTemplates::kNoInfo);
}

}  // namespace sigauction
