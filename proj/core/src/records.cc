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

#include "sigauction/records.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sigauction/error.h"
#include "sigauction/random.h"

namespace sigauction {
namespace {

using Json = nlohmann::json;

Json SignalToJson(const Signal& signal) {
  if (const auto* exact = std::get_if<ExactSignal>(&signal)) {
    return {{"kind", "exact"}, {"value", exact->value}};
  }
  if (const auto* tier = std::get_if<TierSignal>(&signal)) {
    Json j = {{"kind", "tier"}, {"level", std::string(ToString(tier->level))}};
    j["tier_average"] =
        tier->tier_average ? Json(*tier->tier_average) : Json(nullptr);
    return j;
  }
  return {{"kind", "no_info"}};
}

Signal SignalFromJson(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exact") return ExactSignal{j.at("value").get<double>()};
  if (kind == "tier") {
    TierSignal t;
    const std::string level = j.at("level").get<std::string>();
    if (level != "high" && level != "low") {
      throw ParseError("unknown tier level '" + level + "'");
    }
    t.level = level == "high" ? TierLevel::kHigh : TierLevel::kLow;
    if (!j.at("tier_average").is_null()) {
      t.tier_average = j.at("tier_average").get<double>();
    }
    return t;
  }
  if (kind == "no_info") return NoInfoSignal{};
  throw ParseError("unknown signal kind '" + kind + "'");
}

}  // namespace

std::string RecordToJson(const RoundRecord& rec) {
  Json j;
  j["round_index"] = rec.round_index;
  j["config_id"] = rec.config_id;
  j["seed"] = rec.seed;
  j["valuation_seed"] = rec.valuation_seed;
  j["status"] = rec.ok() ? "ok" : "failed";
  j["valuations"] = rec.valuations;

  Json signals = Json::array();
  for (const Signal& s : rec.signals) signals.push_back(SignalToJson(s));
  j["signals"] = std::move(signals);

  Json responses = Json::array();
  for (const BidResponse& r : rec.responses) {
    responses.push_back({{"bidder", r.bidder.index},
                         {"bid", r.bid},
                         {"estimated_value", r.estimated_value},
                         {"explanation", r.explanation}});
  }
  j["responses"] = std::move(responses);

  if (rec.outcome) {
    j["outcome"] = {{"winner", rec.outcome->winner.index},
                    {"price", rec.outcome->price},
                    {"winning_bid", rec.outcome->winning_bid}};
  } else {
    j["outcome"] = nullptr;
  }
  if (rec.failure) {
    j["failure"] = {
        {"phase", std::string(ToString(rec.failure->phase))},
        {"bidder", rec.failure->bidder ? Json(rec.failure->bidder->index)
                                       : Json(nullptr)},
        {"cause", rec.failure->cause}};
  } else {
    j["failure"] = nullptr;
  }

  Json exchanges = Json::array();
  for (const Exchange& ex : rec.exchanges) {
    exchanges.push_back({{"bidder", ex.bidder},
                         {"attempt", ex.attempt},
                         {"request", ex.request},
                         {"response", ex.response},
                         {"latency_ms", ex.latency_ms},
                         {"error", ex.error}});
  }
  j["exchanges"] = std::move(exchanges);
  // Invalid UTF-8 from a remote endpoint is replaced rather than aborting.
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

RoundRecord RecordFromJson(std::string_view line) {
  try {
    const Json j = Json::parse(line);
    RoundRecord rec;
    rec.round_index = j.at("round_index").get<int>();
    rec.config_id = j.at("config_id").get<std::string>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.valuation_seed = j.at("valuation_seed").get<std::uint64_t>();
    rec.valuations = j.at("valuations").get<std::vector<double>>();
    for (const Json& s : j.at("signals")) rec.signals.push_back(SignalFromJson(s));
    for (const Json& r : j.at("responses")) {
      rec.responses.push_back(BidResponse{BidderId{r.at("bidder").get<int>()},
                                          r.at("bid").get<double>(),
                                          r.at("estimated_value").get<double>(),
                                          r.at("explanation").get<std::string>()});
    }
    if (!j.at("outcome").is_null()) {
      const Json& o = j.at("outcome");
      rec.outcome = AuctionOutcome{BidderId{o.at("winner").get<int>()},
                                   o.at("price").get<double>(),
                                   o.at("winning_bid").get<double>()};
    }
    if (!j.at("failure").is_null()) {
      const Json& f = j.at("failure");
      RoundFailure failure;
      failure.phase = ParseRoundPhase(f.at("phase").get<std::string>());
      if (!f.at("bidder").is_null()) {
        failure.bidder = BidderId{f.at("bidder").get<int>()};
      }
      failure.cause = f.at("cause").get<std::string>();
      rec.failure = failure;
    }
    for (const Json& ex : j.at("exchanges")) {
      rec.exchanges.push_back(Exchange{ex.at("bidder").get<int>(),
                                       ex.at("attempt").get<int>(),
                                       ex.at("request").get<std::string>(),
                                       ex.at("response").get<std::string>(),
                                       ex.at("latency_ms").get<double>(),
                                       ex.at("error").get<std::string>()});
    }
    const std::size_t n = rec.valuations.size();
    if (rec.signals.size() != n ||
        (rec.ok() && rec.responses.size() != n)) {
      throw ParseError("record " + std::to_string(rec.round_index) +
                       " has inconsistent bidder counts");
    }
    if (rec.outcome && (rec.outcome->winner.index < 0 ||
                        static_cast<std::size_t>(rec.outcome->winner.index) >= n)) {
      throw ParseError("record winner index out of range");
    }
    return rec;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed round record: ") + e.what());
  }
}

void WriteJsonl(const std::filesystem::path& path,
                std::span<const RoundRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const RoundRecord& rec : records) out << RecordToJson(rec) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<RoundRecord> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<RoundRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(RecordFromJson(line));
  }
  return out;
}

std::string FileChecksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(ss.str())));
  return hex;
}

}  // namespace sigauction
