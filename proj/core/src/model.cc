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

#include "sigauction/model.h"

#include <cmath>
#include <string>

#include "sigauction/error.h"
#include "sigauction/format.h"

namespace sigauction {

ValuePrior::ValuePrior(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ConfigError("value prior requires lo < hi, got [" +
                      FormatDouble(lo) + ", " + FormatDouble(hi) + "]");
  }
}

DisclosureStrategy DisclosureStrategy::FullDisclosure() {
  return {StrategyFamily::kFullDisclosure, 1.0, PooledInfo::kNoInfo};
}

DisclosureStrategy DisclosureStrategy::PoolHigh(double d, PooledInfo info) {
  return {StrategyFamily::kPoolHigh, d, info};
}

DisclosureStrategy DisclosureStrategy::PoolLow(double d, PooledInfo info) {
  return {StrategyFamily::kPoolLow, d, info};
}

DisclosureStrategy DisclosureStrategy::Randomized(double d) {
  return {StrategyFamily::kRandomized, d, PooledInfo::kNoInfo};
}

void DisclosureStrategy::Validate() const {
  if (!(disclosure_fraction >= 0.0 && disclosure_fraction <= 1.0)) {
    throw ConfigError("disclosure_fraction must lie in [0, 1], got " +
                      FormatDouble(disclosure_fraction));
  }
  switch (family) {
    case StrategyFamily::kFullDisclosure:
      return;
    case StrategyFamily::kPoolHigh:
    case StrategyFamily::kPoolLow:
      if (pooled_info == PooledInfo::kNoInfo) {
        throw ConfigError(std::string(ToString(family)) +
                          " requires pooled_info tier_only or "
                          "tier_with_average");
      }
      return;
    case StrategyFamily::kRandomized:
      if (pooled_info != PooledInfo::kNoInfo) {
        throw ConfigError("randomized pooling requires pooled_info no_info");
      }
      return;
  }
}

std::string_view ToString(StrategyFamily family) {
  switch (family) {
    case StrategyFamily::kFullDisclosure:
      return "full_disclosure";
    case StrategyFamily::kPoolHigh:
      return "pool_high";
    case StrategyFamily::kPoolLow:
      return "pool_low";
    case StrategyFamily::kRandomized:
      return "randomized";
  }
  return "unknown";
}

std::string_view ToString(PooledInfo info) {
  switch (info) {
    case PooledInfo::kTierOnly:
      return "tier_only";
    case PooledInfo::kTierWithAverage:
      return "tier_with_average";
    case PooledInfo::kNoInfo:
      return "no_info";
  }
  return "unknown";
}

StrategyFamily ParseStrategyFamily(std::string_view text) {
  for (auto f : {StrategyFamily::kFullDisclosure, StrategyFamily::kPoolHigh,
                 StrategyFamily::kPoolLow, StrategyFamily::kRandomized}) {
    if (ToString(f) == text) return f;
  }
  throw ConfigError("unknown strategy family '" + std::string(text) + "'");
}

PooledInfo ParsePooledInfo(std::string_view text) {
  for (auto p : {PooledInfo::kTierOnly, PooledInfo::kTierWithAverage,
                 PooledInfo::kNoInfo}) {
    if (ToString(p) == text) return p;
  }
  throw ConfigError("unknown pooled_info '" + std::string(text) + "'");
}

std::string_view ToString(TierLevel level) {
  return level == TierLevel::kHigh ? "high" : "low";
}

std::string_view ToString(RoundPhase phase) {
  switch (phase) {
    case RoundPhase::kContextInit:
      return "context_init";
    case RoundPhase::kInformationDisclosure:
      return "information_disclosure";
    case RoundPhase::kBidGeneration:
      return "bid_generation";
    case RoundPhase::kAuctionExecution:
      return "auction_execution";
    case RoundPhase::kOutcomeAnnouncement:
      return "outcome_announcement";
  }
  return "unknown";
}

RoundPhase ParseRoundPhase(std::string_view text) {
  for (auto p : {RoundPhase::kContextInit, RoundPhase::kInformationDisclosure,
                 RoundPhase::kBidGeneration, RoundPhase::kAuctionExecution,
                 RoundPhase::kOutcomeAnnouncement}) {
    if (ToString(p) == text) return p;
  }
  throw ParseError("unknown round phase '" + std::string(text) + "'");
}

std::vector<double> SampleValuations(const ValuePrior& prior, int n,
                                     Rng& rng) {
  if (n < 2) {
    throw ConfigError("at least 2 bidders are required, got " +
                      std::to_string(n));
  }
  std::vector<double> values(static_cast<std::size_t>(n));
  for (double& v : values) v = rng.Uniform(prior.lo(), prior.hi());
  return values;
}

}  // namespace sigauction
