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

#ifndef SIGAUCTION_PIPELINE_H_
#define SIGAUCTION_PIPELINE_H_

#include <cstdint>
#include <string>

#include "sigauction/agents.h"
#include "sigauction/auction.h"
#include "sigauction/model.h"

namespace sigauction {

struct RoundConfig {
  std::string config_id;
  int round_index = 0;
  int n_bidders = 10;
  ValuePrior prior;
  DisclosureStrategy strategy;
  TieRule tie_rule = TieRule::kLowestIndex;
  BackendSpec backend;
  // Drives signaling, tie-breaking and agent streams.
  std::uint64_t round_seed = 0;
  // Drives valuation sampling. Equal to a function of round_seed alone
  // unless common random numbers are in use.
  std::uint64_t valuation_seed = 0;
};

// The seed streams a round derives from its seeds.
std::uint64_t SignalStreamSeed(const RoundConfig& rc);
std::uint64_t TieStreamSeed(const RoundConfig& rc);
std::uint64_t AgentStreamSeed(const RoundConfig& rc, int bidder);

// Runs one round through its phases: context init (valuations), information
// disclosure (signals), signal reception and bid generation (one agent call
// per bidder, assembled in BidderId order), auction execution, and outcome
// announcement (the outcome stored in the record).
//
// Throws ConfigError before any phase when the configuration is invalid.
// An AgentFailure or invalid bid returns a record with `failure` set and no
// outcome.
RoundRecord RunRound(const RoundConfig& rc, const BidderAgent& agent);

// Same, with the built-in analytic agent for rc.backend.
RoundRecord RunRound(const RoundConfig& rc);

}  // namespace sigauction

#endif  // SIGAUCTION_PIPELINE_H_
