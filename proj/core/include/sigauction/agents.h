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

// Bidder agents. Every backend answers the same question: given a private
// signal and the public context, what is my value estimate and what do I
// bid?

#ifndef SIGAUCTION_AGENTS_H_
#define SIGAUCTION_AGENTS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigauction/error.h"
#include "sigauction/model.h"

namespace sigauction {

// What every bidder is told before any private signal.
struct PublicContext {
  int n_bidders = 10;
  std::string auction_type = "sealed-bid second-price";
  ValuePrior prior;
};

enum class BackendKind { kOracleTruthful, kScriptedPaper, kRationalBayes, kLlm };

std::string_view ToString(BackendKind kind);
BackendKind ParseBackendKind(std::string_view text);

struct DecisionRequest {
  BidderId bidder;
  Signal signal;
  PublicContext context;
  // Only populated for agents whose reads_true_value() is true.
  std::optional<double> true_value;
  // Per-bidder stream seed for stochastic agents.
  std::uint64_t seed = 0;
};

struct AgentReply {
  BidResponse response;
  std::vector<Exchange> exchanges;
};

// An agent could not produce a valid response. Rounds hitting this are
// aborted, never imputed.
class AgentFailure : public Error {
 public:
  AgentFailure(const std::string& what, std::vector<Exchange> exchanges = {})
      : Error(what), exchanges_(std::move(exchanges)) {}
  const std::vector<Exchange>& exchanges() const { return exchanges_; }

 private:
  std::vector<Exchange> exchanges_;
};

class BidderAgent {
 public:
  virtual ~BidderAgent() = default;

  virtual BackendKind kind() const = 0;
  // Benchmark agents that bypass signals and read the valuation directly.
  virtual bool reads_true_value() const { return false; }
  // True when the n decisions of a round are worth issuing concurrently
  // (remote backends).
  virtual bool concurrent_calls() const { return false; }

  // Implementations are reentrant: Decide may be called concurrently.
  virtual AgentReply Decide(const DecisionRequest& request) const = 0;
};

// Bids its true valuation. Ignores the signal.
class OracleTruthfulAgent : public BidderAgent {
 public:
  BackendKind kind() const override { return BackendKind::kOracleTruthful; }
  bool reads_true_value() const override { return true; }
  AgentReply Decide(const DecisionRequest& request) const override;
};

struct ScriptedParams {
  double high_tier_estimate = 0.75;
  double low_tier_estimate = 0.25;

  friend bool operator==(const ScriptedParams&,
                         const ScriptedParams&) = default;
};

// Deterministic replica of the documented LLM bidder behavior: truthful on a
// disclosed value, anchors on a disclosed tier average, a constant for a
// bare tier, and the prior mean with no information.
class ScriptedPaperAgent : public BidderAgent {
 public:
  explicit ScriptedPaperAgent(ScriptedParams params = {});
  BackendKind kind() const override { return BackendKind::kScriptedPaper; }
  AgentReply Decide(const DecisionRequest& request) const override;

 private:
  ScriptedParams params_;
};

// Posterior-mean benchmark. Unlike the bidders being studied, it knows the
// signaling map: how many of the n bidders are pooled in the tier.
struct TierKnowledge {
  int n_bidders = 0;
  int pooled_count = 0;
};

// Posterior mean of a uniform [0, 1] valuation given membership in the top
// (resp. bottom) `pooled` of n order statistics.
double RationalHighTierEstimate(int n, int pooled);
double RationalLowTierEstimate(int n, int pooled);

class RationalBayesAgent : public BidderAgent {
 public:
  explicit RationalBayesAgent(std::optional<TierKnowledge> knowledge);
  BackendKind kind() const override { return BackendKind::kRationalBayes; }
  // Throws ConfigError on a tier-only signal without TierKnowledge.
  AgentReply Decide(const DecisionRequest& request) const override;

 private:
  std::optional<TierKnowledge> knowledge_;
};

// Optional perturbation of tier-signal bids: with the given probability a
// high-tier bidder underbids and a low-tier bidder overbids by `delta`
// (clamped to [0, 1]). The estimate is left untouched.
struct DeviationParams {
  double probability = 0.0;
  double delta = 0.05;
  bool apply_with_average = false;

  friend bool operator==(const DeviationParams&,
                         const DeviationParams&) = default;
};

class DeviationDecorator : public BidderAgent {
 public:
  DeviationDecorator(std::shared_ptr<const BidderAgent> inner,
                     DeviationParams params);
  BackendKind kind() const override { return inner_->kind(); }
  bool reads_true_value() const override { return inner_->reads_true_value(); }
  bool concurrent_calls() const override { return inner_->concurrent_calls(); }
  AgentReply Decide(const DecisionRequest& request) const override;

 private:
  std::shared_ptr<const BidderAgent> inner_;
  DeviationParams params_;
};

// Configuration-level description of a backend.
struct BackendSpec {
  BackendKind kind = BackendKind::kScriptedPaper;
  ScriptedParams scripted;
  std::optional<DeviationParams> deviation;

  friend bool operator==(const BackendSpec&, const BackendSpec&) = default;
};

// Builds one of the built-in analytic backends for a grid cell. RationalBayes
// receives the TierKnowledge implied by a tiered strategy. Throws ConfigError
// for BackendKind::kLlm, which is built by the LLM client.
std::shared_ptr<const BidderAgent> MakeAnalyticAgent(
    const BackendSpec& spec, const DisclosureStrategy& strategy, int n_bidders);

}  // namespace sigauction

#endif  // SIGAUCTION_AGENTS_H_
