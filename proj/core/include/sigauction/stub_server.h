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

// Local test double for an OpenAI-compatible chat-completions endpoint.
//
// In the default mode it reads the private signal out of the prompt and
// answers the way ScriptedPaperAgent would, so a full LLM-backend run can
// be exercised offline and compared against the analytic backend.

#ifndef SIGAUCTION_STUB_SERVER_H_
#define SIGAUCTION_STUB_SERVER_H_

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include "sigauction/agents.h"

namespace sigauction {

enum class StubMode {
  kScripted,    // valid replies derived from the prompt's private message
  kOutOfRange,  // well-formed replies whose bid is out_of_range_bid
  kGarbage,     // never a parsable reply
};

std::string_view ToString(StubMode mode);
StubMode ParseStubMode(std::string_view text);

struct StubOptions {
  StubMode mode = StubMode::kScripted;
  // Per correlation id, the first N replies are malformed before valid ones.
  int malformed_before_valid = 0;
  // Per correlation id, the first N requests get HTTP 429.
  int throttle_first = 0;
  // Wrap replies in prose and a ```json fence.
  bool fenced = false;
  double out_of_range_bid = 2.0;
  ScriptedParams scripted;
  std::chrono::milliseconds delay{0};
};

// The stub's reply content for a prompt (the assistant message text).
// Exposed for tests; the server uses it for kScripted replies.
std::string StubScriptedReply(std::string_view private_message,
                              const ScriptedParams& params, bool fenced);

class StubLlmServer {
 public:
  explicit StubLlmServer(StubOptions options = {});
  ~StubLlmServer();
  StubLlmServer(const StubLlmServer&) = delete;
  StubLlmServer& operator=(const StubLlmServer&) = delete;

  // Binds and serves on a background thread. port 0 picks a free port.
  // Returns the bound port. Throws IoError if binding fails.
  int Start(const std::string& host = "127.0.0.1", int port = 0);

  // Serves on the calling thread until Stop() is called from elsewhere.
  void ServeForever(const std::string& host, int port);

  void Stop();

  // e.g. "http://127.0.0.1:41234/v1"
  std::string base_url() const;
  int request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sigauction

#endif  // SIGAUCTION_STUB_SERVER_H_
