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

// Shared domain types for the signaling-auction simulator.

#ifndef SIGAUCTION_MODEL_H_
#define SIGAUCTION_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sigauction/random.h"

namespace sigauction {

// Index of a bidder within a round, in [0, n). Assigned in sampling order.
struct BidderId {
  int index = 0;

  friend bool operator==(BidderId, BidderId) = default;
  friend auto operator<=>(BidderId, BidderId) = default;
};

// Common prior over valuations: independent uniform draws on [lo, hi].
class ValuePrior {
 public:
  ValuePrior() = default;
  // Throws ConfigError unless lo < hi (both finite).
  ValuePrior(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mean() const { return 0.5 * (lo_ + hi_); }

  friend bool operator==(const ValuePrior&, const ValuePrior&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
};

enum class StrategyFamily { kFullDisclosure, kPoolHigh, kPoolLow, kRandomized };
enum class PooledInfo { kTierOnly, kTierWithAverage, kNoInfo };

// The auctioneer's signaling map.
//
// disclosure_fraction is the share of bidders that receive their exact value.
// For tiered families it fixes the per-round disclosed count; for Randomized
// it is the per-bidder disclosure probability.
struct DisclosureStrategy {
  StrategyFamily family = StrategyFamily::kFullDisclosure;
  double disclosure_fraction = 1.0;
  PooledInfo pooled_info = PooledInfo::kNoInfo;

  static DisclosureStrategy FullDisclosure();
  static DisclosureStrategy PoolHigh(double d, PooledInfo info);
  static DisclosureStrategy PoolLow(double d, PooledInfo info);
  static DisclosureStrategy Randomized(double d);

  bool tiered() const {
    return family == StrategyFamily::kPoolHigh ||
           family == StrategyFamily::kPoolLow;
  }

  // Throws ConfigError on an out-of-range fraction or an invalid
  // family/pooled_info combination.
  void Validate() const;

  friend bool operator==(const DisclosureStrategy&,
                         const DisclosureStrategy&) = default;
};

std::string_view ToString(StrategyFamily family);
std::string_view ToString(PooledInfo info);
StrategyFamily ParseStrategyFamily(std::string_view text);
PooledInfo ParsePooledInfo(std::string_view text);

enum class TierLevel { kHigh, kLow };
std::string_view ToString(TierLevel level);

struct ExactSignal {
  double value = 0.0;
  friend bool operator==(const ExactSignal&, const ExactSignal&) = default;
};

struct TierSignal {
  TierLevel level = TierLevel::kHigh;
  std::optional<double> tier_average;
  friend bool operator==(const TierSignal&, const TierSignal&) = default;
};

struct NoInfoSignal {
  friend bool operator==(const NoInfoSignal&, const NoInfoSignal&) = default;
};

// What one bidder is told about their own valuation this round.
using Signal = std::variant<ExactSignal, TierSignal, NoInfoSignal>;

// A bidder's sealed bid together with the value estimate behind it.
struct BidResponse {
  BidderId bidder;
  double bid = 0.0;
  double estimated_value = 0.0;
  std::string explanation;

  friend bool operator==(const BidResponse&, const BidResponse&) = default;
};

struct AuctionOutcome {
  BidderId winner;
  double price = 0.0;        // second-highest bid
  double winning_bid = 0.0;  // highest bid

  friend bool operator==(const AuctionOutcome&,
                         const AuctionOutcome&) = default;
};

// One request/response pair with an external bidder backend, kept verbatim
// so that responses can be re-parsed offline.
struct Exchange {
  int bidder = 0;
  int attempt = 0;  // 1-based
  std::string request;
  std::string response;
  double latency_ms = 0.0;
  std::string error;  // empty when the response was accepted

  friend bool operator==(const Exchange&, const Exchange&) = default;
};

enum class RoundPhase {
  kContextInit,
  kInformationDisclosure,
  kBidGeneration,
  kAuctionExecution,
  kOutcomeAnnouncement,
};
std::string_view ToString(RoundPhase phase);
RoundPhase ParseRoundPhase(std::string_view text);

struct RoundFailure {
  RoundPhase phase = RoundPhase::kBidGeneration;
  std::optional<BidderId> bidder;
  std::string cause;

  friend bool operator==(const RoundFailure&, const RoundFailure&) = default;
};

// Complete audit record of one auction round.
//
// On success valuations, signals and responses all have n entries and
// `outcome` is set. A failed round carries `failure` and no outcome or
// responses.
struct RoundRecord {
  int round_index = 0;
  std::string config_id;
  std::uint64_t seed = 0;
  std::uint64_t valuation_seed = 0;
  std::vector<double> valuations;
  std::vector<Signal> signals;
  std::vector<BidResponse> responses;
  std::optional<AuctionOutcome> outcome;
  std::optional<RoundFailure> failure;
  std::vector<Exchange> exchanges;

  bool ok() const { return outcome.has_value() && !failure.has_value(); }
  std::size_t n_bidders() const { return valuations.size(); }

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

// Draws n i.i.d. valuations from the prior. Throws ConfigError if n < 2.
std::vector<double> SampleValuations(const ValuePrior& prior, int n, Rng& rng);

}  // namespace sigauction

#endif  // SIGAUCTION_MODEL_H_
