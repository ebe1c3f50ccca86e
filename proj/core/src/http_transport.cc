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

#include <string>

#include "httplib.h"
#include "sigauction/error.h"
#include "sigauction/llm_client.h"

namespace sigauction {
namespace {

struct EndpointUrl {
  std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
  std::string path;              // e.g. "/v1/chat/completions"
};

EndpointUrl SplitBaseUrl(const std::string& base_url) {
  const std::size_t scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("llm.base_url must start with http:// or https://, got '" +
                      base_url + "'");
  }
  const std::string scheme = base_url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported scheme in llm.base_url: " + scheme);
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    throw ConfigError("https endpoints need a build with OpenSSL");
  }
#endif
  const std::size_t path_start = base_url.find('/', scheme_end + 3);
  EndpointUrl url;
  url.scheme_host_port = base_url.substr(0, path_start);
  std::string prefix =
      path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  url.path = prefix + "/chat/completions";
  return url;
}

class HttpChatTransport : public ChatTransport {
 public:
  HttpChatTransport(const LlmConfig& cfg, std::string api_key)
      : url_(SplitBaseUrl(cfg.base_url)),
        timeout_(cfg.request_timeout),
        api_key_(std::move(api_key)) {}

  TransportResult Post(const std::string& body,
                       const std::string& correlation_id) override {
    // httplib::Client is not safe for concurrent use; one per request.
    httplib::Client client(url_.scheme_host_port);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers = {
        {"Authorization", "Bearer " + api_key_},
        {"X-Correlation-Id", correlation_id},
    };
    TransportResult out;
    auto res = client.Post(url_.path, headers, body, "application/json");
    if (!res) {
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
  }

 private:
  EndpointUrl url_;
  std::chrono::milliseconds timeout_;
  std::string api_key_;
};

}  // namespace

std::unique_ptr<ChatTransport> MakeHttpTransport(const LlmConfig& cfg,
                                                 std::string api_key) {
  return std::make_unique<HttpChatTransport>(cfg, std::move(api_key));
}

}  // namespace sigauction
