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

#include "sigauction/llm_client.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <thread>

#include "json.hpp"
#include "sigauction/error.h"
#include "sigauction/format.h"
#include "sigauction/signaling.h"

namespace sigauction {
namespace {

using Json = nlohmann::json;

constexpr std::string_view kPreamble =
    "You are a rational bidder in a second-price auction. The auction is "
    "one-time: you submit the bid and will receive the results. As a prior, "
    "you don't know your true value towards the current item. You only know "
    "your true-value falls between [{LO}, {HI}]. Auctioneer may give you more "
    "information. The value of the item for each bidder is independently "
    "drawn from a uniform distribution over [{LO}, {HI}] and the auction will "
    "consist of {N} bidders, including you. This is common knowledge to all "
    "bidders. However, your exact value is private and known only to you, "
    "based on signals or disclosed information provided by the auctioneer.";

constexpr std::string_view kInstruction =
    "Based on this information, submit a bid between 0 and 1, and provide "
    "the following details in your response: name: your name as a bidder. "
    "bid: Your bid for this round (a value between 0 and 1). estimated value: "
    "Your estimate of your true value based on the information received. "
    "explanation: A brief explanation of how you decided at your bid. Please "
    "return your response in the provided format\n"
    "Format: a single JSON object {\"name\": string, \"bid\": number, "
    "\"estimated value\": number, \"explanation\": string}";

void ReplaceAll(std::string& text, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Strict full-string decimal parse.
std::optional<double> ParseNumber(std::string_view text) {
  std::string t = Trim(text);
  if (!t.empty() && (t.front() == '"' || t.front() == '\'')) {
    t = Trim(std::string_view(t).substr(1, t.size() >= 2 ? t.size() - 2 : 0));
  }
  while (!t.empty() && (t.back() == ',' || t.back() == '.')) t.pop_back();
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

// Balanced-brace object candidates, string-literal aware.
std::vector<std::string_view> ObjectCandidates(std::string_view text) {
  std::vector<std::string_view> out;
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        out.push_back(text.substr(start, i - start + 1));
        break;
      }
    }
  }
  return out;
}

struct RawFields {
  std::optional<std::string> name;
  std::optional<std::string> bid;
  std::optional<std::string> estimate;
  std::optional<std::string> explanation;
  bool bid_numeric = false;
  double bid_value = 0.0;
  bool estimate_numeric = false;
  double estimate_value = 0.0;
};

std::string KeyOf(std::string_view key) {
  std::string k = Lower(Trim(key));
  std::replace(k.begin(), k.end(), '_', ' ');
  return k;
}

std::optional<RawFields> FromJsonObject(const Json& obj) {
  if (!obj.is_object()) return std::nullopt;
  RawFields f;
  for (const auto& [key, value] : obj.items()) {
    const std::string k = KeyOf(key);
    const std::string as_text =
        value.is_string() ? value.get<std::string>() : value.dump();
    if (k == "name") {
      f.name = as_text;
    } else if (k == "bid") {
      f.bid = as_text;
      if (value.is_number()) {
        f.bid_numeric = true;
        f.bid_value = value.get<double>();
      }
    } else if (k == "estimated value") {
      f.estimate = as_text;
      if (value.is_number()) {
        f.estimate_numeric = true;
        f.estimate_value = value.get<double>();
      }
    } else if (k == "explanation") {
      f.explanation = as_text;
    }
  }
  if (!f.bid && !f.estimate) return std::nullopt;
  return f;
}

RawFields FromKeyValueLines(std::string_view text) {
  RawFields f;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = Trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    // Strip list markers and markdown emphasis.
    line.erase(std::remove(line.begin(), line.end(), '*'), line.end());
    while (!line.empty() && (line.front() == '-' || line.front() == ' ')) {
      line.erase(line.begin());
    }
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string k = KeyOf(line.substr(0, colon));
    const std::string v = Trim(std::string_view(line).substr(colon + 1));
    if (k == "name" && !f.name) f.name = v;
    if (k == "bid" && !f.bid) f.bid = v;
    if (k == "estimated value" && !f.estimate) f.estimate = v;
    if (k == "explanation" && !f.explanation) f.explanation = v;
  }
  return f;
}

double NumericField(const std::optional<std::string>& text, bool numeric,
                    double numeric_value, std::string_view field) {
  if (!text) {
    throw ParseError("response is missing field '" + std::string(field) + "'");
  }
  double v = numeric_value;
  if (!numeric) {
    auto parsed = ParseNumber(*text);
    if (!parsed) {
      throw ParseError("field '" + std::string(field) +
                       "' is not numeric: " + *text);
    }
    v = *parsed;
  }
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError("field '" + std::string(field) + "' = " +
                          FormatDouble(v) + " is outside [0, 1]");
  }
  return v;
}

bool Throttled(int status) { return status == 429 || status >= 500; }

}  // namespace

void LlmConfig::Validate() const {
  if (base_url.empty()) throw ConfigError("llm.base_url must not be empty");
  if (model_name.empty()) throw ConfigError("llm.model must not be empty");
  if (api_key_env.empty()) throw ConfigError("llm.api_key_env must not be empty");
  if (temperature != 0.0 && !allow_nonzero_temperature) {
    throw ConfigError(
        "llm.temperature must be 0 unless llm.allow_nonzero_temperature is "
        "set");
  }
  if (max_retries < 0) throw ConfigError("llm.max_retries must be >= 0");
  if (max_in_flight < 1) throw ConfigError("llm.max_in_flight must be >= 1");
  if (request_timeout.count() <= 0) {
    throw ConfigError("llm.request_timeout_ms must be > 0");
  }
}

std::string RenderPublicPreamble(const PublicContext& ctx) {
  std::string text(kPreamble);
  ReplaceAll(text, "{LO}", FormatDouble(ctx.prior.lo()));
  ReplaceAll(text, "{HI}", FormatDouble(ctx.prior.hi()));
  ReplaceAll(text, "{N}", std::to_string(ctx.n_bidders));
  return text;
}

std::string_view BiddingInstruction() { return kInstruction; }

std::vector<ChatMessage> BuildPrompt(const PublicContext& ctx,
                                     const Signal& signal,
                                     PreambleRole preamble_role) {
  return {
      {preamble_role == PreambleRole::kSystem ? "system" : "user",
       RenderPublicPreamble(ctx)},
      {"user", RenderPrivateMessage(signal)},
      {"user", std::string(kInstruction)},
  };
}

ParsedBid ParseBidResponse(std::string_view text) {
  std::optional<RawFields> fields;
  for (std::string_view candidate : ObjectCandidates(text)) {
    Json obj = Json::parse(candidate, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) continue;
    fields = FromJsonObject(obj);
    if (fields) break;
  }
  if (!fields) fields = FromKeyValueLines(text);

  ParsedBid out;
  if (!fields->name) throw ParseError("response is missing field 'name'");
  if (!fields->explanation) {
    throw ParseError("response is missing field 'explanation'");
  }
  out.name = *fields->name;
  out.explanation = *fields->explanation;
  out.bid = NumericField(fields->bid, fields->bid_numeric, fields->bid_value,
                         "bid");
  out.estimated_value =
      NumericField(fields->estimate, fields->estimate_numeric,
                   fields->estimate_value, "estimated value");
  return out;
}

LlmClient::LlmClient(LlmConfig cfg, std::unique_ptr<ChatTransport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {
  cfg_.Validate();
  if (!transport_) throw ConfigError("llm client needs a transport");
  in_flight_ = std::make_unique<std::counting_semaphore<>>(cfg_.max_in_flight);
}

std::shared_ptr<LlmClient> LlmClient::FromEnvironment(const LlmConfig& cfg) {
  cfg.Validate();
  const char* key = std::getenv(cfg.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("environment variable " + cfg.api_key_env +
                      " holding the API key is not set");
  }
  return std::make_shared<LlmClient>(cfg, MakeHttpTransport(cfg, key));
}

std::string LlmClient::RequestBody(
    const std::vector<ChatMessage>& messages) const {
  Json msgs = Json::array();
  for (const ChatMessage& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  Json body = {{"model", cfg_.model_name},
               {"temperature", cfg_.temperature},
               {"messages", std::move(msgs)}};
  return body.dump();
}

CompletionResult LlmClient::Complete(const std::vector<ChatMessage>& messages,
                                     const std::string& correlation_id,
                                     int bidder) const {
  const std::string body = RequestBody(messages);
  CompletionResult result;
  const int max_attempts = cfg_.max_retries + 1;
  std::chrono::milliseconds backoff = cfg_.backoff_initial;

  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    Exchange ex;
    ex.bidder = bidder;
    ex.attempt = attempt;
    ex.request = body;

    TransportResult tr;
    const auto t0 = std::chrono::steady_clock::now();
    {
      in_flight_->acquire();
      try {
        tr = transport_->Post(body, correlation_id);
      } catch (const std::exception& e) {
        tr.status = 0;
        tr.error = e.what();
      }
      in_flight_->release();
    }
    ex.latency_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    ex.response = tr.body;
    result.attempts = attempt;

    bool back_off = false;
    if (tr.status == 0) {
      ex.error = "transport: " + (tr.error.empty() ? "no response" : tr.error);
      back_off = true;
    } else if (Throttled(tr.status)) {
      ex.error = "http status " + std::to_string(tr.status);
      back_off = true;
    } else if (tr.status != 200) {
      // Client errors (bad key, bad model) do not heal on retry.
      ex.error = "http status " + std::to_string(tr.status);
      const std::string what = "bidder " + std::to_string(bidder) +
                               ": endpoint rejected the request (" +
                               ex.error + ")";
      result.exchanges.push_back(std::move(ex));
      throw AgentFailure(what, std::move(result.exchanges));
    } else {
      try {
        Json envelope = Json::parse(tr.body);
        const std::string content =
            envelope.at("choices").at(0).at("message").at("content")
                .get<std::string>();
        result.bid = ParseBidResponse(content);
        result.exchanges.push_back(std::move(ex));
        return result;
      } catch (const ValidationError& e) {
        ex.error = std::string("validation: ") + e.what();
      } catch (const ParseError& e) {
        ex.error = std::string("parse: ") + e.what();
      } catch (const Json::exception& e) {
        ex.error = std::string("envelope: ") + e.what();
      }
    }
    result.exchanges.push_back(std::move(ex));
    if (back_off && attempt < max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  const std::string what =
      "bidder " + std::to_string(bidder) + ": no valid response after " +
      std::to_string(max_attempts) +
      " attempts (last: " + result.exchanges.back().error + ")";
  throw AgentFailure(what, std::move(result.exchanges));
}

LlmAgent::LlmAgent(std::shared_ptr<const LlmClient> client)
    : client_(std::move(client)) {
  if (!client_) throw ConfigError("llm agent needs a client");
}

AgentReply LlmAgent::Decide(const DecisionRequest& request) const {
  const auto messages = BuildPrompt(request.context, request.signal,
                                    client_->config().preamble_role);
  char id[17];
  std::snprintf(id, sizeof(id), "%016llx",
                static_cast<unsigned long long>(request.seed));
  CompletionResult r = client_->Complete(messages, id, request.bidder.index);
  AgentReply reply;
  reply.response = BidResponse{request.bidder, r.bid.bid,
                               r.bid.estimated_value, r.bid.explanation};
  reply.exchanges = std::move(r.exchanges);
  return reply;
}

}  // namespace sigauction
