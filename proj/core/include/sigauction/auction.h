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

#ifndef SIGAUCTION_AUCTION_H_
#define SIGAUCTION_AUCTION_H_

#include <span>
#include <string_view>

#include "sigauction/model.h"
#include "sigauction/random.h"

namespace sigauction {

enum class TieRule {
  kLowestIndex,   // lowest BidderId among the tied top bids wins
  kSeededRandom,  // uniform among the tied top bids, drawn from the rng
};

std::string_view ToString(TieRule rule);
TieRule ParseTieRule(std::string_view text);

struct SealedBid {
  BidderId bidder;
  double bid = 0.0;
};

// Sealed-bid second-price auction without reserve price.
//
// The highest bid wins and pays the second-highest bid value (equal to the
// winning bid when the top bid is tied). The rng is consumed only when
// TieRule::kSeededRandom has to break a tie.
//
// Throws MechanismError for fewer than two bids, ValidationError for a bid
// outside [0, 1].
AuctionOutcome RunSecondPrice(std::span<const SealedBid> bids, TieRule rule,
                              Rng& rng);

}  // namespace sigauction

#endif  // SIGAUCTION_AUCTION_H_
