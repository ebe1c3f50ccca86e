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

#ifndef SIGAUCTION_SIGNALING_H_
#define SIGAUCTION_SIGNALING_H_

#include <span>
#include <string>
#include <vector>

#include "sigauction/model.h"
#include "sigauction/random.h"

namespace sigauction {

// Output of a signaling map for one round. disclosed and pooled are sorted
// ascending and partition {0, ..., n-1}.
struct SignalAssignment {
  std::vector<Signal> signals;
  std::vector<BidderId> disclosed;
  std::vector<BidderId> pooled;
};

// Number of bidders that receive exact values under a tiered strategy:
// round-half-up of d * n.
int DisclosedCount(double disclosure_fraction, int n);

// Applies the signaling map to one round's valuations.
//
// Tiered strategies rank bidders by valuation (ties broken by ascending
// BidderId, lower index ranks lower). PoolHigh discloses the
// DisclosedCount() lowest-ranked bidders and pools the rest in the high
// tier; PoolLow discloses the highest-ranked and pools the rest in the low
// tier. With TierWithAverage every pooled bidder also learns the mean true
// valuation of the pooled set. Randomized discloses each bidder
// independently with probability d, drawing from `rng` in BidderId order;
// the other strategies do not touch `rng`.
//
// Throws ConfigError for fewer than two valuations or an invalid strategy.
SignalAssignment AssignSignals(const DisclosureStrategy& strategy,
                               std::span<const double> valuations, Rng& rng);

// Versioned template table for the private messages sent to bidders.
struct MessageTemplates {
  static constexpr int kVersion = 1;
  static constexpr std::string_view kExact =
      "Your true value towards this current auctioned item is {VALUE}";
  static constexpr std::string_view kTier =
      "Your true value towards this current auctioned item is not disclosed "
      "due to your value is being in the {POOL LEVEL} value tier. This "
      "indicates your value towards this item is {POOL LEVEL}er than some of "
      "other bidders, but the exact value will remain unknown.";
  static constexpr std::string_view kTierAverage =
      " The average value of all bidders in the same tier with you is "
      "{TIER AVG VALUE}";
  static constexpr std::string_view kNoInfo =
      "You have no information about your true value.";
};

// Renders the private message for one signal. Values are printed with the
// shortest round-trip decimal representation, so distinct signals always
// yield distinct messages.
std::string RenderPrivateMessage(const Signal& signal);

}  // namespace sigauction

#endif  // SIGAUCTION_SIGNALING_H_
