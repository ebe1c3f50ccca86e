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

#include "sigauction/stub_server.h"

#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sigauction/error.h"
#include "sigauction/format.h"

namespace sigauction {
namespace {

using Json = nlohmann::json;

constexpr std::string_view kExactPrefix =
    "Your true value towards this current auctioned item is ";
constexpr std::string_view kNotDisclosed = "is not disclosed";
constexpr std::string_view kAveragePrefix = "in the same tier with you is ";
constexpr std::string_view kNoInfoPrefix = "You have no information";

double LeadingNumber(std::string_view text) {
  double v = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), v);
  return v;
}

std::string CompletionEnvelope(const std::string& content) {
  Json body = {
      {"id", "stub-completion"},
      {"object", "chat.completion"},
      {"model", "stub"},
      {"choices",
       Json::array({{{"index", 0},
                     {"message", {{"role", "assistant"}, {"content", content}}},
                     {"finish_reason", "stop"}}})},
  };
  return body.dump();
}

std::string Reply(const std::string& name, double bid, double estimate,
                  const std::string& explanation, bool fenced) {
  Json obj = {{"name", name},
              {"bid", bid},
              {"estimated value", estimate},
              {"explanation", explanation}};
  if (!fenced) return obj.dump();
  return "Here is my decision.\n```json\n" + obj.dump(2) +
         "\n```\nGood luck to everyone.";
}

}  // namespace

std::string_view ToString(StubMode mode) {
  switch (mode) {
    case StubMode::kScripted:
      return "scripted";
    case StubMode::kOutOfRange:
      return "out_of_range";
    case StubMode::kGarbage:
      return "garbage";
  }
  return "unknown";
}

StubMode ParseStubMode(std::string_view text) {
  for (auto m : {StubMode::kScripted, StubMode::kOutOfRange, StubMode::kGarbage}) {
    if (ToString(m) == text) return m;
  }
  throw ConfigError("unknown stub mode '" + std::string(text) + "'");
}

std::string StubScriptedReply(std::string_view msg,
                              const ScriptedParams& params, bool fenced) {
  double estimate = 0.5;
  std::string why = "No information, so I use the midpoint of the prior.";
  if (msg.find(kNotDisclosed) != std::string_view::npos) {
    const bool high = msg.find("the high value tier") != std::string_view::npos;
    const std::size_t avg = msg.find(kAveragePrefix);
    if (avg != std::string_view::npos) {
      estimate = LeadingNumber(msg.substr(avg + kAveragePrefix.size()));
      why = "I anchor on the disclosed tier average " + FormatDouble(estimate) +
            " and bid it.";
    } else {
      estimate = high ? params.high_tier_estimate : params.low_tier_estimate;
      why = std::string("Only my tier is known (") + (high ? "high" : "low") +
            "), so I bid the tier midpoint.";
    }
  } else if (msg.rfind(kExactPrefix, 0) == 0) {
    estimate = LeadingNumber(msg.substr(kExactPrefix.size()));
    why = "My value is known; truthful bidding is dominant, so I bid " +
          FormatDouble(estimate) + ".";
  }
  return Reply("stub_bidder", estimate, estimate, why, fenced);
}

struct StubLlmServer::Impl {
  StubOptions options;
  httplib::Server server;
  std::thread thread;
  std::string host = "127.0.0.1";
  int port = 0;
  std::atomic<int> requests{0};
  std::mutex mu;
  std::map<std::string, int> seen;  // per correlation id

  void Handle(const httplib::Request& req, httplib::Response& res) {
    ++requests;
    if (options.delay.count() > 0) std::this_thread::sleep_for(options.delay);

    std::string key = req.get_header_value("X-Correlation-Id");
    if (key.empty()) key = req.body;
    int nth = 0;
    {
      std::lock_guard<std::mutex> lock(mu);
      nth = seen[key]++;
    }

    if (nth < options.throttle_first) {
      res.status = 429;
      res.set_content(R"({"error":{"message":"rate limited"}})",
                      "application/json");
      return;
    }

    Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("messages")) {
      res.status = 400;
      res.set_content(R"({"error":{"message":"bad request"}})",
                      "application/json");
      return;
    }
    std::string private_message;
    for (const Json& m : body["messages"]) {
      const std::string content = m.value("content", "");
      if (content.rfind(kExactPrefix.substr(0, 15), 0) == 0 ||
          content.rfind(kNoInfoPrefix, 0) == 0) {
        private_message = content;
        break;
      }
    }

    std::string content;
    const int replies_after_throttle = nth - options.throttle_first;
    if (options.mode == StubMode::kGarbage ||
        replies_after_throttle < options.malformed_before_valid) {
      content = "I would rather not say. bid: maybe";
    } else if (options.mode == StubMode::kOutOfRange) {
      content = Reply("stub_bidder", options.out_of_range_bid,
                      options.out_of_range_bid, "Bidding big.",
                      options.fenced);
    } else {
      content = StubScriptedReply(private_message, options.scripted,
                                  options.fenced);
    }
    res.status = 200;
    res.set_content(CompletionEnvelope(content), "application/json");
  }
};

StubLlmServer::StubLlmServer(StubOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->options = options;
  impl_->server.Post(R"(.*/chat/completions)",
                     [this](const httplib::Request& req,
                            httplib::Response& res) { impl_->Handle(req, res); });
}

StubLlmServer::~StubLlmServer() { Stop(); }

int StubLlmServer::Start(const std::string& host, int port) {
  impl_->host = host;
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port < 0) {
    throw IoError("stub server could not bind " + host + ":" +
                  std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void StubLlmServer::ServeForever(const std::string& host, int port) {
  impl_->host = host;
  impl_->port = port;
  if (!impl_->server.listen(host, port)) {
    throw IoError("stub server could not listen on " + host + ":" +
                  std::to_string(port));
  }
}

void StubLlmServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubLlmServer::base_url() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->port) + "/v1";
}

int StubLlmServer::request_count() const { return impl_->requests.load(); }

}  // namespace sigauction
