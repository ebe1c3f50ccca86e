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

// LLM-backed bidders over an OpenAI-compatible chat-completions endpoint.

#ifndef SIGAUCTION_LLM_CLIENT_H_
#define SIGAUCTION_LLM_CLIENT_H_

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "sigauction/agents.h"
#include "sigauction/model.h"

namespace sigauction {

enum class PreambleRole { kSystem, kUser };

struct LlmConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model_name = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  // A non-zero temperature is rejected unless this is set.
  bool allow_nonzero_temperature = false;
  int max_retries = 3;
  std::chrono::milliseconds request_timeout{60000};
  int max_in_flight = 4;
  // First backoff after a throttling or transport error; doubles per attempt.
  std::chrono::milliseconds backoff_initial{250};
  PreambleRole preamble_role = PreambleRole::kSystem;

  // Throws ConfigError.
  void Validate() const;
};

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

// The public information every bidder receives, with n and the prior
// substituted.
std::string RenderPublicPreamble(const PublicContext& ctx);

// Bidding instruction followed by the expected response shape.
std::string_view BiddingInstruction();

// [public preamble, private signal message, bidding instruction].
// Pure templating: identical inputs give byte-identical prompts.
std::vector<ChatMessage> BuildPrompt(
    const PublicContext& ctx, const Signal& signal,
    PreambleRole preamble_role = PreambleRole::kSystem);

struct ParsedBid {
  std::string name;
  double bid = 0.0;
  double estimated_value = 0.0;
  std::string explanation;
};

// Extracts a bid object from free-form completion text. Accepts a JSON
// object anywhere in the text (surrounding prose and code fences allowed),
// falling back to "key: value" lines. The estimate may be keyed
// "estimated value" or "estimated_value".
//
// Throws ParseError for a missing or non-numeric field and ValidationError
// when bid or estimate fall outside [0, 1].
ParsedBid ParseBidResponse(std::string_view text);

struct TransportResult {
  int status = 0;             // HTTP status; 0 when no response arrived
  std::string body;
  std::string error;          // transport-level failure description
};

// Sends one chat-completions request body and returns the raw reply.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual TransportResult Post(const std::string& body,
                               const std::string& correlation_id) = 0;
};

// cpp-httplib transport: POST {base_url}/chat/completions with a bearer key.
std::unique_ptr<ChatTransport> MakeHttpTransport(const LlmConfig& cfg,
                                                 std::string api_key);

struct CompletionResult {
  ParsedBid bid;
  int attempts = 0;
  std::vector<Exchange> exchanges;
};

// Retrying chat client. At most max_in_flight requests are outstanding at
// once; the client is safe to share across threads and rounds.
class LlmClient {
 public:
  LlmClient(LlmConfig cfg, std::unique_ptr<ChatTransport> transport);

  // Reads the key from cfg.api_key_env and builds an HTTP transport.
  // Throws ConfigError if the variable is unset or empty.
  static std::shared_ptr<LlmClient> FromEnvironment(const LlmConfig& cfg);

  // Sends the prompt, re-sending it after parse/validation failures and
  // throttling/transport errors until max_retries + 1 attempts are spent.
  // Throws AgentFailure (carrying every exchange) when no attempt succeeds.
  CompletionResult Complete(const std::vector<ChatMessage>& messages,
                            const std::string& correlation_id,
                            int bidder) const;

  const LlmConfig& config() const { return cfg_; }

 private:
  std::string RequestBody(const std::vector<ChatMessage>& messages) const;

  LlmConfig cfg_;
  std::unique_ptr<ChatTransport> transport_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

class LlmAgent : public BidderAgent {
 public:
  explicit LlmAgent(std::shared_ptr<const LlmClient> client);
  BackendKind kind() const override { return BackendKind::kLlm; }
  bool concurrent_calls() const override { return true; }
  AgentReply Decide(const DecisionRequest& request) const override;

 private:
  std::shared_ptr<const LlmClient> client_;
};

}  // namespace sigauction

#endif  // SIGAUCTION_LLM_CLIENT_H_
