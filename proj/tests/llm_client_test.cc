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

#include <atomic>
#include <cstdlib>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "sigauction/error.h"
#include "sigauction/format.h"
#include "sigauction/random.h"
#include "sigauction/signaling.h"
#include "sigauction/stub_server.h"

namespace sigauction {
namespace {

std::string Envelope(const std::string& content) {
  std::string escaped;
  for (char c : content) {
    if (c == '"' || c == '\\') escaped += '\\';
    if (c == '\n') {
      escaped += "\\n";
      continue;
    }
    escaped += c;
  }
  return R"({"choices":[{"index":0,"message":{"role":"assistant","content":")" +
         escaped + R"("}}]})";
}

const char kValid[] =
    R"({"name":"bidder_3","bid":0.5,"estimated value":0.5,"explanation":"prior mean"})";

// Replays a fixed script of transport results and records what was sent.
class ScriptedTransport : public ChatTransport {
 public:
  explicit ScriptedTransport(std::vector<TransportResult> script)
      : script_(script.begin(), script.end()) {}

  TransportResult Post(const std::string& body,
                       const std::string& correlation_id) override {
    std::lock_guard<std::mutex> lock(mu_);
    bodies.push_back(body);
    ids.push_back(correlation_id);
    if (script_.empty()) return {200, Envelope(kValid), ""};
    TransportResult r = script_.front();
    script_.pop_front();
    return r;
  }

  std::vector<std::string> bodies;
  std::vector<std::string> ids;

 private:
  std::mutex mu_;
  std::deque<TransportResult> script_;
};

LlmConfig FastConfig(int max_retries = 3) {
  LlmConfig cfg;
  cfg.max_retries = max_retries;
  cfg.backoff_initial = std::chrono::milliseconds(1);
  cfg.request_timeout = std::chrono::milliseconds(5000);
  return cfg;
}

std::vector<ChatMessage> SomePrompt() {
  return BuildPrompt(PublicContext{}, NoInfoSignal{});
}

TEST(BuildPromptTest, ExactSignal) {
  const auto m = BuildPrompt(PublicContext{}, ExactSignal{0.7});
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].role, "system");
  EXPECT_NE(m[0].content.find("consist of 10 bidders"), std::string::npos);
  EXPECT_NE(m[0].content.find("[0, 1]"), std::string::npos);
  EXPECT_NE(m[0].content.find("second-price auction"), std::string::npos);
  EXPECT_NE(m[1].content.find("is 0.7"), std::string::npos);
  for (const char* field : {"name", "bid", "estimated value", "explanation"}) {
    EXPECT_NE(m[2].content.find(field), std::string::npos) << field;
  }
}

TEST(BuildPromptTest, NoInfoAndTier) {
  const auto none = BuildPrompt(PublicContext{}, NoInfoSignal{});
  EXPECT_EQ(none[1].content, "You have no information about your true value.");
  const auto tier =
      BuildPrompt(PublicContext{}, TierSignal{TierLevel::kHigh, 0.65});
  EXPECT_NE(tier[1].content.find("high value tier"), std::string::npos);
  EXPECT_NE(tier[1].content.find("0.65"), std::string::npos);
}

TEST(BuildPromptTest, PreambleRoleAndContext) {
  PublicContext ctx;
  ctx.n_bidders = 5;
  ctx.prior = ValuePrior(0.2, 0.9);
  const auto m = BuildPrompt(ctx, NoInfoSignal{}, PreambleRole::kUser);
  EXPECT_EQ(m[0].role, "user");
  EXPECT_EQ(m[1].role, "user");
  EXPECT_NE(m[0].content.find("consist of 5 bidders"), std::string::npos);
  EXPECT_NE(m[0].content.find("[0.2, 0.9]"), std::string::npos);
  EXPECT_EQ(m[0].content.find("{"), std::string::npos);
}

TEST(BuildPromptTest, ByteIdentical) {
  const Signal s = TierSignal{TierLevel::kLow, 0.17774305518631073};
  EXPECT_EQ(BuildPrompt(PublicContext{}, s), BuildPrompt(PublicContext{}, s));
}

// No prompt mentions a valuation other than the recipient's own signal.
TEST(BuildPromptTest, NoInformationLeak) {
  Rng rng(31);
  for (int round = 0; round < 200; ++round) {
    const auto v = SampleValuations(ValuePrior(), 10, rng);
    const auto a = AssignSignals(
        DisclosureStrategy::PoolHigh(0.4, PooledInfo::kTierOnly), v, rng);
    for (int i = 0; i < 10; ++i) {
      std::string all;
      for (const auto& m : BuildPrompt(PublicContext{}, a.signals[i])) {
        all += m.content;
      }
      for (int j = 0; j < 10; ++j) {
        if (j == i) continue;
        EXPECT_EQ(all.find(FormatDouble(v[j])), std::string::npos);
      }
    }
  }
}

TEST(ParseBidResponseTest, WellFormed) {
  const auto p = ParseBidResponse(kValid);
  EXPECT_EQ(p.name, "bidder_3");
  EXPECT_EQ(p.bid, 0.5);
  EXPECT_EQ(p.estimated_value, 0.5);
  EXPECT_EQ(p.explanation, "prior mean");
}

TEST(ParseBidResponseTest, FencedWithProse) {
  const auto p = ParseBidResponse(
      "Sure, here is my answer.\n```json\n{\"name\": \"b\", \"bid\": "
      "0.6657625810811798, \"estimated_value\": 0.6657625810811798, "
      "\"explanation\": \"tier average\"}\n```\nGood luck!");
  EXPECT_EQ(p.bid, 0.6657625810811798);
  EXPECT_EQ(p.estimated_value, 0.6657625810811798);
}

TEST(ParseBidResponseTest, KeyValueLines) {
  const auto p = ParseBidResponse(
      "name: bidder_1\nbid: 0.42\nestimated value: 0.42\nexplanation: truth");
  EXPECT_EQ(p.bid, 0.42);
  EXPECT_EQ(p.estimated_value, 0.42);
}

TEST(ParseBidResponseTest, Errors) {
  EXPECT_THROW(
      ParseBidResponse(
          R"({"name":"b","bid":1.4,"estimated value":0.5,"explanation":"x"})"),
      ValidationError);
  EXPECT_THROW(
      ParseBidResponse(
          R"({"name":"b","bid":0.4,"estimated value":-0.5,"explanation":"x"})"),
      ValidationError);
  EXPECT_THROW(
      ParseBidResponse(
          R"({"name":"b","bid":"lots","estimated value":0.5,"explanation":"x"})"),
      ParseError);
  EXPECT_THROW(
      ParseBidResponse(R"({"name":"b","estimated value":0.5,"explanation":"x"})"),
      ParseError);
  EXPECT_THROW(ParseBidResponse("I would rather not say. bid: maybe"),
               ParseError);
  EXPECT_THROW(ParseBidResponse(""), ParseError);
}

TEST(LlmConfigTest, Validate) {
  EXPECT_NO_THROW(LlmConfig{}.Validate());
  LlmConfig hot;
  hot.temperature = 0.7;
  EXPECT_THROW(hot.Validate(), ConfigError);
  hot.allow_nonzero_temperature = true;
  EXPECT_NO_THROW(hot.Validate());
  LlmConfig bad;
  bad.max_retries = -1;
  EXPECT_THROW(bad.Validate(), ConfigError);
  bad = LlmConfig{};
  bad.max_in_flight = 0;
  EXPECT_THROW(bad.Validate(), ConfigError);
}

TEST(LlmClientTest, MissingKeyIsConfigError) {
  LlmConfig cfg;
  cfg.api_key_env = "SIGAUCTION_TEST_UNSET_KEY";
  unsetenv("SIGAUCTION_TEST_UNSET_KEY");
  EXPECT_THROW(LlmClient::FromEnvironment(cfg), ConfigError);
}

TEST(LlmClientTest, RequestBodyShape) {
  auto transport = std::make_unique<ScriptedTransport>(
      std::vector<TransportResult>{});
  auto* t = transport.get();
  LlmClient client(FastConfig(), std::move(transport));
  const auto r = client.Complete(SomePrompt(), "00000000000000ab", 3);
  EXPECT_EQ(r.attempts, 1);
  ASSERT_EQ(t->bodies.size(), 1u);
  EXPECT_NE(t->bodies[0].find(R"("temperature":0)"), std::string::npos);
  EXPECT_NE(t->bodies[0].find(R"("model":"gpt-4o")"), std::string::npos);
  EXPECT_NE(t->bodies[0].find(R"("role":"system")"), std::string::npos);
  EXPECT_EQ(t->ids[0], "00000000000000ab");
  ASSERT_EQ(r.exchanges.size(), 1u);
  EXPECT_EQ(r.exchanges[0].request, t->bodies[0]);
  EXPECT_TRUE(r.exchanges[0].error.empty());
  EXPECT_EQ(r.exchanges[0].bidder, 3);
}

TEST(LlmClientTest, GarbageTwiceThenValid) {
  LlmClient client(FastConfig(3),
                   std::make_unique<ScriptedTransport>(std::vector<TransportResult>{
                       {200, Envelope("no idea"), ""},
                       {200, Envelope("bid: maybe"), ""}}));
  const auto r = client.Complete(SomePrompt(), "id", 0);
  EXPECT_EQ(r.attempts, 3);
  ASSERT_EQ(r.exchanges.size(), 3u);
  EXPECT_FALSE(r.exchanges[0].error.empty());
  EXPECT_FALSE(r.exchanges[1].error.empty());
  EXPECT_TRUE(r.exchanges[2].error.empty());
  EXPECT_EQ(r.exchanges[2].attempt, 3);
  EXPECT_EQ(r.bid.bid, 0.5);
}

TEST(LlmClientTest, ExhaustionCarriesEveryExchange) {
  const std::string bad = Envelope(
      R"({"name":"b","bid":2.0,"estimated value":2.0,"explanation":"x"})");
  LlmClient client(FastConfig(2),
                   std::make_unique<ScriptedTransport>(std::vector<TransportResult>{
                       {200, bad, ""}, {200, bad, ""}, {200, bad, ""},
                       {200, bad, ""}}));
  try {
    client.Complete(SomePrompt(), "id", 4);
    FAIL() << "expected AgentFailure";
  } catch (const AgentFailure& e) {
    ASSERT_EQ(e.exchanges().size(), 3u);
    for (const auto& ex : e.exchanges()) {
      EXPECT_NE(ex.error.find("validation"), std::string::npos);
      EXPECT_EQ(ex.response, bad);
    }
    EXPECT_NE(std::string(e.what()).find("bidder 4"), std::string::npos);
  }
}

TEST(LlmClientTest, ThrottleAndTransportErrorsRetry) {
  LlmClient client(FastConfig(3),
                   std::make_unique<ScriptedTransport>(std::vector<TransportResult>{
                       {429, "{}", ""}, {0, "", "connection refused"},
                       {503, "", ""}}));
  const auto r = client.Complete(SomePrompt(), "id", 0);
  EXPECT_EQ(r.attempts, 4);
  EXPECT_EQ(r.exchanges[0].error, "http status 429");
  EXPECT_NE(r.exchanges[1].error.find("connection refused"), std::string::npos);
}

TEST(LlmClientTest, ClientErrorFailsImmediately) {
  LlmClient client(FastConfig(3),
                   std::make_unique<ScriptedTransport>(std::vector<TransportResult>{
                       {401, R"({"error":"bad key"})", ""}}));
  try {
    client.Complete(SomePrompt(), "id", 0);
    FAIL() << "expected AgentFailure";
  } catch (const AgentFailure& e) {
    EXPECT_EQ(e.exchanges().size(), 1u);
    EXPECT_EQ(e.exchanges()[0].error, "http status 401");
  }
}

// Counts concurrent Post calls to check the in-flight bound.
class SlowTransport : public ChatTransport {
 public:
  TransportResult Post(const std::string&, const std::string&) override {
    const int now = ++active;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --active;
    return {200, Envelope(kValid), ""};
  }
  std::atomic<int> active{0};
  std::atomic<int> peak{0};
};

TEST(LlmClientTest, BoundsRequestsInFlight) {
  auto transport = std::make_unique<SlowTransport>();
  auto* t = transport.get();
  LlmConfig cfg = FastConfig();
  cfg.max_in_flight = 2;
  LlmClient client(cfg, std::move(transport));
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&client, i] { client.Complete(SomePrompt(), "x", i); });
  }
  for (auto& th : threads) th.join();
  EXPECT_LE(t->peak.load(), 2);
  EXPECT_GE(t->peak.load(), 1);
}

class StubServerTest : public ::testing::Test {
 protected:
  std::shared_ptr<LlmClient> Client(StubLlmServer& server, int max_retries) {
    server.Start();
    LlmConfig cfg = FastConfig(max_retries);
    cfg.base_url = server.base_url();
    return std::make_shared<LlmClient>(cfg,
                                       MakeHttpTransport(cfg, "test-key"));
  }
};

TEST_F(StubServerTest, ScriptedReplyMatchesScriptedAgent) {
  StubLlmServer server;
  auto client = Client(server, 0);
  LlmAgent agent(client);
  const std::vector<std::pair<Signal, double>> cases = {
      {ExactSignal{0.3568638462861372}, 0.3568638462861372},
      {TierSignal{TierLevel::kHigh, std::nullopt}, 0.75},
      {TierSignal{TierLevel::kLow, std::nullopt}, 0.25},
      {TierSignal{TierLevel::kLow, 0.17774305518631073}, 0.17774305518631073},
      {NoInfoSignal{}, 0.5}};
  for (const auto& [signal, expected] : cases) {
    DecisionRequest r;
    r.signal = signal;
    const auto reply = agent.Decide(r);
    EXPECT_EQ(reply.response.bid, expected);
    EXPECT_EQ(reply.exchanges.size(), 1u);
  }
  EXPECT_EQ(server.request_count(), 5);
}

TEST_F(StubServerTest, MalformedTwiceThenValidPerCorrelationId) {
  StubOptions options;
  options.malformed_before_valid = 2;
  options.fenced = true;
  StubLlmServer server(options);
  auto client = Client(server, 3);
  for (const char* id : {"a", "b"}) {
    const auto r = client->Complete(SomePrompt(), id, 0);
    EXPECT_EQ(r.attempts, 3);
    EXPECT_EQ(r.bid.bid, 0.5);
  }
}

TEST_F(StubServerTest, OutOfRangeExhausts) {
  StubOptions options;
  options.mode = StubMode::kOutOfRange;
  StubLlmServer server(options);
  auto client = Client(server, 2);
  try {
    client->Complete(SomePrompt(), "z", 1);
    FAIL() << "expected AgentFailure";
  } catch (const AgentFailure& e) {
    EXPECT_EQ(e.exchanges().size(), 3u);
  }
  EXPECT_EQ(server.request_count(), 3);
}

TEST_F(StubServerTest, ThrottledThenServed) {
  StubOptions options;
  options.throttle_first = 1;
  StubLlmServer server(options);
  auto client = Client(server, 1);
  const auto r = client->Complete(SomePrompt(), "t", 0);
  EXPECT_EQ(r.attempts, 2);
  EXPECT_EQ(r.exchanges[0].error, "http status 429");
}

TEST(StubScriptedReplyTest, ParsesBack) {
  const std::string msg =
      RenderPrivateMessage(TierSignal{TierLevel::kHigh, 0.6657625810811798});
  const auto p = ParseBidResponse(StubScriptedReply(msg, {}, true));
  EXPECT_EQ(p.bid, 0.6657625810811798);
}

TEST(HttpTransportTest, UnreachableEndpointIsTransportError) {
  LlmConfig cfg = FastConfig(1);
  cfg.base_url = "http://127.0.0.1:1/v1";
  cfg.request_timeout = std::chrono::milliseconds(500);
  LlmClient client(cfg, MakeHttpTransport(cfg, "k"));
  try {
    client.Complete(SomePrompt(), "u", 0);
    FAIL() << "expected AgentFailure";
  } catch (const AgentFailure& e) {
    ASSERT_EQ(e.exchanges().size(), 2u);
    EXPECT_NE(e.exchanges()[0].error.find("transport"), std::string::npos);
  }
}

}  // namespace
}  // namespace sigauction
