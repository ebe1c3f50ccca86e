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

#include "sigauction/auction.h"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "sigauction/error.h"
#include "sigauction/format.h"

namespace sigauction {

std::string_view ToString(TieRule rule) {
  return rule == TieRule::kLowestIndex ? "lowest_index" : "seeded_random";
}

TieRule ParseTieRule(std::string_view text) {
  if (text == "lowest_index") return TieRule::kLowestIndex;
  if (text == "seeded_random") return TieRule::kSeededRandom;
  throw ConfigError("unknown tie_rule '" + std::string(text) + "'");
}

AuctionOutcome RunSecondPrice(std::span<const SealedBid> bids, TieRule rule,
                              Rng& rng) {
  if (bids.size() < 2) {
    throw MechanismError("second-price auction needs at least 2 bids, got " +
                         std::to_string(bids.size()));
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const SealedBid& b : bids) {
    if (!(b.bid >= 0.0 && b.bid <= 1.0)) {
      throw ValidationError("bid " + FormatDouble(b.bid) + " of bidder " +
                            std::to_string(b.bidder.index) +
                            " is outside [0, 1]");
    }
    if (b.bid > top) top = b.bid;
  }

  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i].bid == top) tied.push_back(i);
  }

  std::size_t winner_pos = tied.front();
  if (tied.size() > 1) {
    if (rule == TieRule::kLowestIndex) {
      for (std::size_t i : tied) {
        if (bids[i].bidder < bids[winner_pos].bidder) winner_pos = i;
      }
    } else {
      // Draw over the tied set ordered by BidderId so the choice does not
      // depend on the order bids were submitted in.
      std::vector<std::size_t> by_id = tied;
      std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
        return bids[a].bidder < bids[b].bidder;
      });
      winner_pos = by_id[rng.UniformIndex(by_id.size())];
    }
  }

  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i != winner_pos && bids[i].bid > second) second = bids[i].bid;
  }

  AuctionOutcome out;
  out.winner = bids[winner_pos].bidder;
  out.winning_bid = top;
  out.price = second;
  return out;
}

}  // namespace sigauction
