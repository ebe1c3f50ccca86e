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

#include "sigauction/pipeline.h"

#include <future>
#include <optional>
#include <vector>

#include "sigauction/error.h"
#include "sigauction/random.h"
#include "sigauction/signaling.h"

namespace sigauction {
namespace {

struct BidderResult {
  std::optional<AgentReply> reply;
  std::optional<std::string> error;
  std::vector<Exchange> exchanges;
};

BidderResult DecideOne(const BidderAgent& agent, DecisionRequest request) {
  BidderResult r;
  try {
    AgentReply reply = agent.Decide(request);
    r.exchanges = reply.exchanges;
    r.reply = std::move(reply);
  } catch (const AgentFailure& e) {
    r.error = e.what();
    r.exchanges = e.exchanges();
  }
  return r;
}

void Validate(const RoundConfig& rc) {
  if (rc.n_bidders < 2) {
    throw ConfigError("a round needs at least 2 bidders, got " +
                      std::to_string(rc.n_bidders));
  }
  rc.strategy.Validate();
}

}  // namespace

std::uint64_t SignalStreamSeed(const RoundConfig& rc) {
  return StableHash(rc.round_seed, "signals", 0);
}

std::uint64_t TieStreamSeed(const RoundConfig& rc) {
  return StableHash(rc.round_seed, "ties", 0);
}

std::uint64_t AgentStreamSeed(const RoundConfig& rc, int bidder) {
  return StableHash(rc.round_seed, "agent", static_cast<std::uint64_t>(bidder));
}

RoundRecord RunRound(const RoundConfig& rc, const BidderAgent& agent) {
  Validate(rc);

  RoundRecord rec;
  rec.round_index = rc.round_index;
  rec.config_id = rc.config_id;
  rec.seed = rc.round_seed;
  rec.valuation_seed = rc.valuation_seed;

  // Context initialization.
  Rng valuation_rng(rc.valuation_seed);
  rec.valuations = SampleValuations(rc.prior, rc.n_bidders, valuation_rng);

  // Information disclosure. Every signal exists before any agent runs.
  Rng signal_rng(SignalStreamSeed(rc));
  rec.signals = AssignSignals(rc.strategy, rec.valuations, signal_rng).signals;

  // Signal reception, belief update and bid generation.
  const PublicContext ctx{rc.n_bidders, "sealed-bid second-price", rc.prior};
  std::vector<DecisionRequest> requests;
  requests.reserve(rc.n_bidders);
  for (int i = 0; i < rc.n_bidders; ++i) {
    DecisionRequest req{BidderId{i}, rec.signals[i], ctx, std::nullopt,
                        AgentStreamSeed(rc, i)};
    if (agent.reads_true_value()) req.true_value = rec.valuations[i];
    requests.push_back(std::move(req));
  }

  std::vector<BidderResult> results(rc.n_bidders);
  if (agent.concurrent_calls()) {
    std::vector<std::future<BidderResult>> pending;
    pending.reserve(rc.n_bidders);
    for (const DecisionRequest& req : requests) {
      pending.push_back(std::async(std::launch::async, DecideOne,
                                   std::cref(agent), req));
    }
    for (int i = 0; i < rc.n_bidders; ++i) results[i] = pending[i].get();
  } else {
    for (int i = 0; i < rc.n_bidders; ++i) {
      results[i] = DecideOne(agent, requests[i]);
    }
  }

  for (BidderResult& r : results) {
    for (Exchange& ex : r.exchanges) rec.exchanges.push_back(std::move(ex));
  }
  for (int i = 0; i < rc.n_bidders; ++i) {
    if (results[i].error) {
      rec.failure = RoundFailure{RoundPhase::kBidGeneration, BidderId{i},
                                 *results[i].error};
      return rec;
    }
  }
  std::vector<BidResponse> responses;
  responses.reserve(rc.n_bidders);
  for (BidderResult& r : results) responses.push_back(r.reply->response);

  // Bid collection and auction execution.
  std::vector<SealedBid> bids;
  bids.reserve(responses.size());
  for (const BidResponse& r : responses) {
    if (!(r.estimated_value >= 0.0 && r.estimated_value <= 1.0)) {
      rec.failure = RoundFailure{RoundPhase::kBidGeneration, r.bidder,
                                 "estimated value outside [0, 1]"};
      return rec;
    }
    bids.push_back(SealedBid{r.bidder, r.bid});
  }
  Rng tie_rng(TieStreamSeed(rc));
  AuctionOutcome outcome;
  try {
    outcome = RunSecondPrice(bids, rc.tie_rule, tie_rng);
  } catch (const Error& e) {
    rec.failure = RoundFailure{RoundPhase::kAuctionExecution, std::nullopt,
                               e.what()};
    return rec;
  }

  // Outcome announcement.
  rec.responses = std::move(responses);
  rec.outcome = outcome;
  return rec;
}

RoundRecord RunRound(const RoundConfig& rc) {
  Validate(rc);
  auto agent = MakeAnalyticAgent(rc.backend, rc.strategy, rc.n_bidders);
  return RunRound(rc, *agent);
}

}  // namespace sigauction
