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

#include "sigauction/agents.h"

#include <algorithm>
#include <string>

#include "sigauction/format.h"
#include "sigauction/random.h"
#include "sigauction/signaling.h"

namespace sigauction {
namespace {

BidResponse Truthful(BidderId bidder, double estimate, std::string why) {
  return BidResponse{bidder, estimate, estimate, std::move(why)};
}

double Rescale(const ValuePrior& prior, double unit) {
  return prior.lo() + (prior.hi() - prior.lo()) * unit;
}

}  // namespace

std::string_view ToString(BackendKind kind) {
  switch (kind) {
    case BackendKind::kOracleTruthful:
      return "oracle_truthful";
    case BackendKind::kScriptedPaper:
      return "scripted_paper";
    case BackendKind::kRationalBayes:
      return "rational_bayes";
    case BackendKind::kLlm:
      return "llm";
  }
  return "unknown";
}

BackendKind ParseBackendKind(std::string_view text) {
  for (auto k : {BackendKind::kOracleTruthful, BackendKind::kScriptedPaper,
                 BackendKind::kRationalBayes, BackendKind::kLlm}) {
    if (ToString(k) == text) return k;
  }
  throw ConfigError("unknown backend '" + std::string(text) + "'");
}

AgentReply OracleTruthfulAgent::Decide(const DecisionRequest& request) const {
  if (!request.true_value) {
    throw ConfigError("oracle_truthful agent was not given the true value");
  }
  return {Truthful(request.bidder, *request.true_value,
                   "Benchmark: bids the true valuation directly."),
          {}};
}

ScriptedPaperAgent::ScriptedPaperAgent(ScriptedParams params)
    : params_(params) {
  for (double v : {params_.high_tier_estimate, params_.low_tier_estimate}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError("scripted tier estimates must lie in [0, 1]");
    }
  }
}

AgentReply ScriptedPaperAgent::Decide(const DecisionRequest& request) const {
  const Signal& s = request.signal;
  if (const auto* exact = std::get_if<ExactSignal>(&s)) {
    return {Truthful(request.bidder, exact->value,
                     "My value was disclosed as " +
                         FormatDouble(exact->value) +
                         "; bidding it is optimal in a second-price "
                         "auction."),
            {}};
  }
  if (const auto* tier = std::get_if<TierSignal>(&s)) {
    if (tier->tier_average) {
      return {Truthful(request.bidder, *tier->tier_average,
                       "Anchored on the disclosed " +
                           std::string(ToString(tier->level)) +
                           "-tier average " +
                           FormatDouble(*tier->tier_average) + "."),
              {}};
    }
    const double est = tier->level == TierLevel::kHigh
                           ? params_.high_tier_estimate
                           : params_.low_tier_estimate;
    return {Truthful(request.bidder, est,
                     "Only the " + std::string(ToString(tier->level)) +
                         " tier is known; using the tier constant " +
                         FormatDouble(est) + "."),
            {}};
  }
  const double mean = request.context.prior.mean();
  return {Truthful(request.bidder, mean,
                   "No information; using the prior mean " +
                       FormatDouble(mean) + "."),
          {}};
}

double RationalHighTierEstimate(int n, int pooled) {
  if (n < 1 || pooled < 1 || pooled > n) {
    throw ConfigError("invalid tier size " + std::to_string(pooled) + " of " +
                      std::to_string(n));
  }
  return static_cast<double>(2 * n - pooled + 1) /
         static_cast<double>(2 * (n + 1));
}

double RationalLowTierEstimate(int n, int pooled) {
  if (n < 1 || pooled < 1 || pooled > n) {
    throw ConfigError("invalid tier size " + std::to_string(pooled) + " of " +
                      std::to_string(n));
  }
  return static_cast<double>(pooled + 1) / static_cast<double>(2 * (n + 1));
}

RationalBayesAgent::RationalBayesAgent(std::optional<TierKnowledge> knowledge)
    : knowledge_(knowledge) {}

AgentReply RationalBayesAgent::Decide(const DecisionRequest& request) const {
  const Signal& s = request.signal;
  const ValuePrior& prior = request.context.prior;
  if (const auto* exact = std::get_if<ExactSignal>(&s)) {
    return {Truthful(request.bidder, exact->value, "Posterior: disclosed value."),
            {}};
  }
  if (const auto* tier = std::get_if<TierSignal>(&s)) {
    if (tier->tier_average) {
      return {Truthful(request.bidder, *tier->tier_average,
                       "Posterior: disclosed tier average."),
              {}};
    }
    if (!knowledge_) {
      throw ConfigError(
          "rational_bayes needs the tier size (n, pooled count) to interpret "
          "a tier-only signal");
    }
    const double unit =
        tier->level == TierLevel::kHigh
            ? RationalHighTierEstimate(knowledge_->n_bidders,
                                       knowledge_->pooled_count)
            : RationalLowTierEstimate(knowledge_->n_bidders,
                                      knowledge_->pooled_count);
    return {Truthful(request.bidder, Rescale(prior, unit),
                     "Posterior: mean of the pooled order statistics."),
            {}};
  }
  return {Truthful(request.bidder, prior.mean(), "Posterior: prior mean."), {}};
}

DeviationDecorator::DeviationDecorator(std::shared_ptr<const BidderAgent> inner,
                                       DeviationParams params)
    : inner_(std::move(inner)), params_(params) {
  if (!inner_) throw ConfigError("deviation decorator needs an inner agent");
  if (!(params_.probability >= 0.0 && params_.probability <= 1.0) ||
      !(params_.delta >= 0.0 && params_.delta <= 1.0)) {
    throw ConfigError("deviation probability and delta must lie in [0, 1]");
  }
}

AgentReply DeviationDecorator::Decide(const DecisionRequest& request) const {
  AgentReply reply = inner_->Decide(request);
  const auto* tier = std::get_if<TierSignal>(&request.signal);
  if (tier == nullptr) return reply;
  if (tier->tier_average && !params_.apply_with_average) return reply;

  Rng rng(StableHash(request.seed, "deviation", 0));
  if (!rng.Bernoulli(params_.probability)) return reply;

  double& bid = reply.response.bid;
  bid = tier->level == TierLevel::kHigh ? bid - params_.delta
                                        : bid + params_.delta;
  bid = std::clamp(bid, 0.0, 1.0);
  reply.response.explanation += tier->level == TierLevel::kHigh
                                    ? " Shading the bid given tier competition."
                                    : " Bidding up to stay competitive.";
  return reply;
}

std::shared_ptr<const BidderAgent> MakeAnalyticAgent(
    const BackendSpec& spec, const DisclosureStrategy& strategy,
    int n_bidders) {
  std::shared_ptr<const BidderAgent> agent;
  switch (spec.kind) {
    case BackendKind::kOracleTruthful:
      agent = std::make_shared<OracleTruthfulAgent>();
      break;
    case BackendKind::kScriptedPaper:
      agent = std::make_shared<ScriptedPaperAgent>(spec.scripted);
      break;
    case BackendKind::kRationalBayes: {
      std::optional<TierKnowledge> knowledge;
      if (strategy.tiered()) {
        const int disclosed =
            DisclosedCount(strategy.disclosure_fraction, n_bidders);
        knowledge = TierKnowledge{n_bidders, n_bidders - disclosed};
      }
      agent = std::make_shared<RationalBayesAgent>(knowledge);
      break;
    }
    case BackendKind::kLlm:
      throw ConfigError("the llm backend is not an analytic agent");
  }
  if (spec.deviation) {
    agent = std::make_shared<DeviationDecorator>(agent, *spec.deviation);
  }
  return agent;
}

}  // namespace sigauction
