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

#include "sigauction/experiment.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sigauction/error.h"
#include "sigauction/format.h"
#include "sigauction/random.h"
#include "sigauction/records.h"

namespace sigauction {
namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

constexpr std::array<double, 4> kPaperFractions = {0.2, 0.4, 0.6, 0.8};
constexpr std::string_view kManifestName = "manifest.json";
constexpr std::string_view kSummaryName = "summary.csv";

// ---------------------------------------------------------------------------
// Config parsing with key-path diagnostics.

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void CheckKeys(const Json& obj, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) Fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      Fail(Join(path, key), "unknown key");
    }
  }
}

double GetReal(const Json& obj, const std::string& path, const char* key,
               double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) Fail(Join(path, key), "expected a number");
  return v.get<double>();
}

std::int64_t GetInt(const Json& obj, const std::string& path, const char* key,
                    std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) Fail(Join(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

std::string GetString(const Json& obj, const std::string& path,
                      const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_string()) Fail(Join(path, key), "expected a string");
  return v.get<std::string>();
}

bool GetBool(const Json& obj, const std::string& path, const char* key,
             bool fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) Fail(Join(path, key), "expected a boolean");
  return v.get<bool>();
}

// Rethrows library errors with the key path prefixed.
template <typename F>
auto AtPath(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    Fail(path, e.what());
  }
}

std::vector<double> Fractions(const Json& obj, const std::string& path) {
  const bool one = obj.contains("disclosure_fraction");
  const bool many = obj.contains("disclosure_fractions");
  if (one && many) {
    Fail(path, "give disclosure_fraction or disclosure_fractions, not both");
  }
  if (one) return {GetReal(obj, path, "disclosure_fraction", 0.0)};
  if (!many) Fail(Join(path, "disclosure_fractions"), "missing");
  const Json& arr = obj.at("disclosure_fractions");
  const std::string apath = Join(path, "disclosure_fractions");
  if (!arr.is_array() || arr.empty()) Fail(apath, "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) Fail(Index(apath, i), "expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

std::vector<PooledInfo> PooledInfos(const Json& obj, const std::string& path,
                                    PooledInfo fallback) {
  const std::string key_path = Join(path, "pooled_info");
  if (!obj.contains("pooled_info")) return {fallback};
  const Json& v = obj.at("pooled_info");
  std::vector<PooledInfo> out;
  if (v.is_string()) {
    out.push_back(AtPath(key_path, [&] { return ParsePooledInfo(v.get<std::string>()); }));
  } else if (v.is_array() && !v.empty()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) Fail(Index(key_path, i), "expected a string");
      out.push_back(AtPath(Index(key_path, i),
                           [&] { return ParsePooledInfo(v[i].get<std::string>()); }));
    }
  } else {
    Fail(key_path, "expected a string or non-empty array of strings");
  }
  return out;
}

void ParseStrategyEntry(const Json& obj, const std::string& path,
                        std::vector<DisclosureStrategy>& out) {
  CheckKeys(obj, path,
            {"family", "disclosure_fraction", "disclosure_fractions",
             "pooled_info"});
  if (!obj.contains("family")) Fail(Join(path, "family"), "missing");
  const StrategyFamily family = AtPath(Join(path, "family"), [&] {
    return ParseStrategyFamily(GetString(obj, path, "family", ""));
  });
  if (family == StrategyFamily::kFullDisclosure) {
    for (const char* key : {"disclosure_fraction", "disclosure_fractions",
                            "pooled_info"}) {
      if (obj.contains(key)) Fail(Join(path, key), "not used by full_disclosure");
    }
    out.push_back(DisclosureStrategy::FullDisclosure());
    return;
  }
  const std::vector<double> fractions = Fractions(obj, path);
  const PooledInfo fallback = family == StrategyFamily::kRandomized
                                  ? PooledInfo::kNoInfo
                                  : PooledInfo::kTierOnly;
  for (PooledInfo info : PooledInfos(obj, path, fallback)) {
    for (double d : fractions) {
      DisclosureStrategy s{family, d, info};
      AtPath(path, [&] { s.Validate(); });
      out.push_back(s);
    }
  }
}

BackendSpec ParseBackend(const Json& v, const std::string& path) {
  BackendSpec spec;
  if (v.is_string()) {
    spec.kind = AtPath(path, [&] { return ParseBackendKind(v.get<std::string>()); });
    return spec;
  }
  CheckKeys(v, path,
            {"kind", "high_tier_estimate", "low_tier_estimate", "deviation"});
  if (!v.contains("kind")) Fail(Join(path, "kind"), "missing");
  spec.kind = AtPath(Join(path, "kind"), [&] {
    return ParseBackendKind(GetString(v, path, "kind", ""));
  });
  spec.scripted.high_tier_estimate =
      GetReal(v, path, "high_tier_estimate", spec.scripted.high_tier_estimate);
  spec.scripted.low_tier_estimate =
      GetReal(v, path, "low_tier_estimate", spec.scripted.low_tier_estimate);
  for (const char* key : {"high_tier_estimate", "low_tier_estimate"}) {
    const double x = GetReal(v, path, key, 0.5);
    if (!(x >= 0.0 && x <= 1.0)) Fail(Join(path, key), "must lie in [0, 1]");
  }
  if (v.contains("deviation")) {
    const std::string dpath = Join(path, "deviation");
    const Json& d = v.at("deviation");
    CheckKeys(d, dpath, {"probability", "delta", "apply_with_average"});
    DeviationParams p;
    p.probability = GetReal(d, dpath, "probability", p.probability);
    p.delta = GetReal(d, dpath, "delta", p.delta);
    p.apply_with_average =
        GetBool(d, dpath, "apply_with_average", p.apply_with_average);
    if (!(p.probability >= 0.0 && p.probability <= 1.0)) {
      Fail(Join(dpath, "probability"), "must lie in [0, 1]");
    }
    if (!(p.delta >= 0.0 && p.delta <= 1.0)) {
      Fail(Join(dpath, "delta"), "must lie in [0, 1]");
    }
    spec.deviation = p;
  }
  if (spec.kind == BackendKind::kLlm &&
      (spec.deviation || !(spec.scripted == ScriptedParams{}))) {
    Fail(path, "llm backend takes no scripted or deviation parameters");
  }
  return spec;
}

LlmConfig ParseLlm(const Json& v, const std::string& path) {
  CheckKeys(v, path,
            {"base_url", "model", "api_key_env", "temperature",
             "allow_nonzero_temperature", "max_retries", "request_timeout_ms",
             "max_in_flight", "backoff_initial_ms", "preamble_role"});
  LlmConfig c;
  c.base_url = GetString(v, path, "base_url", c.base_url);
  c.model_name = GetString(v, path, "model", c.model_name);
  c.api_key_env = GetString(v, path, "api_key_env", c.api_key_env);
  c.temperature = GetReal(v, path, "temperature", c.temperature);
  c.allow_nonzero_temperature =
      GetBool(v, path, "allow_nonzero_temperature", c.allow_nonzero_temperature);
  c.max_retries = static_cast<int>(GetInt(v, path, "max_retries", c.max_retries));
  c.request_timeout = std::chrono::milliseconds(
      GetInt(v, path, "request_timeout_ms", c.request_timeout.count()));
  c.max_in_flight =
      static_cast<int>(GetInt(v, path, "max_in_flight", c.max_in_flight));
  c.backoff_initial = std::chrono::milliseconds(
      GetInt(v, path, "backoff_initial_ms", c.backoff_initial.count()));
  const std::string role = GetString(v, path, "preamble_role", "system");
  if (role != "system" && role != "user") {
    Fail(Join(path, "preamble_role"), "expected 'system' or 'user'");
  }
  c.preamble_role = role == "system" ? PreambleRole::kSystem : PreambleRole::kUser;
  AtPath(path, [&] { c.Validate(); });
  return c;
}

Json StrategyToJson(const DisclosureStrategy& s) {
  Json j = {{"family", std::string(ToString(s.family))}};
  if (s.family != StrategyFamily::kFullDisclosure) {
    j["disclosure_fraction"] = s.disclosure_fraction;
    j["pooled_info"] = std::string(ToString(s.pooled_info));
  }
  return j;
}

Json BackendToJson(const BackendSpec& b) {
  Json j = {{"kind", std::string(ToString(b.kind))}};
  if (b.kind != BackendKind::kLlm) {
    j["high_tier_estimate"] = b.scripted.high_tier_estimate;
    j["low_tier_estimate"] = b.scripted.low_tier_estimate;
  }
  if (b.deviation) {
    j["deviation"] = {{"probability", b.deviation->probability},
                      {"delta", b.deviation->delta},
                      {"apply_with_average", b.deviation->apply_with_average}};
  }
  return j;
}

Json ConfigJson(const ExperimentConfig& c) {
  Json j;
  j["schema_version"] = c.schema_version;
  j["experiment_seed"] = c.experiment_seed;
  j["n_bidders"] = c.n_bidders;
  j["rounds_per_config"] = c.rounds_per_config;
  j["prior"] = {{"lo", c.prior.lo()}, {"hi", c.prior.hi()}};
  Json strategies = Json::array();
  for (const auto& s : c.strategies) strategies.push_back(StrategyToJson(s));
  j["strategies"] = std::move(strategies);
  Json backends = Json::array();
  for (const auto& b : c.backends) backends.push_back(BackendToJson(b));
  j["backends"] = std::move(backends);
  j["tie_rule"] = std::string(ToString(c.tie_rule));
  j["output_dir"] = c.output_dir.generic_string();
  j["common_random_numbers"] = c.crn_enabled();
  j["truthful_eps"] = c.truthful_eps;
  j["workers"] = c.workers;
  if (c.llm) {
    const LlmConfig& l = *c.llm;
    j["llm"] = {{"base_url", l.base_url},
                {"model", l.model_name},
                {"api_key_env", l.api_key_env},
                {"temperature", l.temperature},
                {"allow_nonzero_temperature", l.allow_nonzero_temperature},
                {"max_retries", l.max_retries},
                {"request_timeout_ms", l.request_timeout.count()},
                {"max_in_flight", l.max_in_flight},
                {"backoff_initial_ms", l.backoff_initial.count()},
                {"preamble_role",
                 l.preamble_role == PreambleRole::kSystem ? "system" : "user"}};
  }
  return j;
}

// Identity of a run for resume purposes: everything that affects outputs.
std::string RunKey(const ExperimentConfig& c) {
  Json j = ConfigJson(c);
  j.erase("output_dir");
  j.erase("workers");
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(j.dump())));
  return hex;
}

SummaryLabel LabelFor(const std::string& config_id,
                      const DisclosureStrategy& s, const BackendSpec& b) {
  SummaryLabel label;
  label.config_id = config_id;
  label.strategy = std::string(ToString(s.family));
  label.disclosure_fraction = s.family == StrategyFamily::kFullDisclosure
                                  ? 1.0
                                  : s.disclosure_fraction;
  label.pooled_info = s.family == StrategyFamily::kFullDisclosure
                          ? "none"
                          : std::string(ToString(s.pooled_info));
  label.backend = std::string(ToString(b.kind));
  return label;
}

// ---------------------------------------------------------------------------
// Execution.

void EnsureWritable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " +
                  ec.message());
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe, std::ios::trunc);
    if (!out || !(out << "ok") || !out.flush()) {
      throw IoError("output directory " + dir.string() + " is not writable");
    }
  }
  fs::remove(probe, ec);
}

void WriteTextAtomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + ": " + ec.message());
}

Json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Json j = Json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw IoError("malformed JSON in " + path.string());
  return j;
}

Json CellToJson(const CellReport& c) {
  Json j = {{"config_id", c.cell.config_id},
            {"file", c.file.filename().generic_string()},
            {"checksum", c.checksum},
            {"records", c.records},
            {"rounds_ok", c.summary.rounds_ok},
            {"rounds_failed", c.summary.rounds_failed},
            {"strategy", StrategyToJson(c.cell.strategy)},
            {"backend", BackendToJson(c.cell.backend)}};
  if (c.cell.backend.kind == BackendKind::kRationalBayes) {
    j["note"] =
        "analytic yardstick: this backend is told the signaling map, which "
        "the studied bidders are not";
  }
  return j;
}

void WriteManifest(const ExperimentConfig& config,
                   const std::vector<CellReport>& cells, bool complete) {
  Json m;
  m["schema_version"] = kConfigSchemaVersion;
  m["tool"] = "sigauction";
  m["version"] = std::string(kToolVersion);
  m["experiment_seed"] = config.experiment_seed;
  m["run_key"] = RunKey(config);
  m["complete"] = complete;
  m["config"] = ConfigJson(config);
  m["llm_api_key_env"] =
      config.uses_llm() && config.llm ? Json(config.llm->api_key_env) : Json(nullptr);
  Json arr = Json::array();
  for (const CellReport& c : cells) arr.push_back(CellToJson(c));
  m["cells"] = std::move(arr);
  m["summary"] = std::string(kSummaryName);
  WriteTextAtomically(config.output_dir / kManifestName, m.dump(2) + "\n");
}

// Checksums of cells completed by an earlier run of the same configuration.
std::map<std::string, std::string> ResumableCells(const ExperimentConfig& config) {
  std::map<std::string, std::string> out;
  const fs::path manifest = config.output_dir / kManifestName;
  if (!fs::exists(manifest)) return out;
  Json m;
  try {
    m = ReadJsonFile(manifest);
  } catch (const IoError&) {
    return out;
  }
  if (!m.is_object() || m.value("run_key", "") != RunKey(config) ||
      !m.contains("cells") || !m["cells"].is_array()) {
    return out;
  }
  for (const Json& c : m["cells"]) {
    if (!c.is_object() ||
        c.value("records", std::int64_t{-1}) != config.rounds_per_config) {
      continue;
    }
    out[c.value("config_id", "")] = c.value("checksum", "");
  }
  return out;
}

std::vector<RoundRecord> RunCellRounds(const ExperimentConfig& config,
                                       const GridCell& cell,
                                       const BidderAgent& agent) {
  const int rounds = config.rounds_per_config;
  std::vector<RoundRecord> records(static_cast<std::size_t>(rounds));
  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, rounds));

  std::atomic<int> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto work = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= rounds) return;
      try {
        records[r] = RunRound(MakeRoundConfig(config, cell, r), agent);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(rounds);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return records;
}

}  // namespace

bool ExperimentConfig::uses_llm() const {
  return std::any_of(backends.begin(), backends.end(), [](const BackendSpec& b) {
    return b.kind == BackendKind::kLlm;
  });
}

bool ExperimentConfig::crn_enabled() const {
  return common_random_numbers.value_or(!uses_llm());
}

void ExperimentConfig::Validate() const {
  if (schema_version != kConfigSchemaVersion) {
    Fail("schema_version", "unsupported version " + std::to_string(schema_version));
  }
  if (n_bidders < 2) Fail("n_bidders", "must be >= 2");
  if (rounds_per_config < 0) Fail("rounds_per_config", "must be >= 0");
  if (strategies.empty()) Fail("strategies", "must not be empty");
  if (backends.empty()) Fail("backends", "must not be empty");
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    AtPath(Index("strategies", i), [&] { strategies[i].Validate(); });
  }
  if (!(truthful_eps >= 0.0)) Fail("truthful_eps", "must be >= 0");
  if (workers < 0) Fail("workers", "must be >= 0");
  if (uses_llm()) {
    if (!llm) Fail("llm", "required when an llm backend is configured");
    AtPath("llm", [&] { llm->Validate(); });
  }
}

std::vector<DisclosureStrategy> PaperDefaultStrategies() {
  std::vector<DisclosureStrategy> out = {DisclosureStrategy::FullDisclosure()};
  for (StrategyFamily family :
       {StrategyFamily::kPoolHigh, StrategyFamily::kPoolLow}) {
    for (PooledInfo info : {PooledInfo::kTierOnly, PooledInfo::kTierWithAverage}) {
      for (double d : kPaperFractions) out.push_back({family, d, info});
    }
  }
  for (double d : kPaperFractions) {
    out.push_back(DisclosureStrategy::Randomized(d));
  }
  return out;
}

ExperimentConfig ParseExperimentConfig(std::string_view json_text) {
  Json root = Json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) throw ConfigError("<root>: not valid JSON");
  CheckKeys(root, "",
            {"schema_version", "experiment_seed", "n_bidders",
             "rounds_per_config", "prior", "strategies", "backends",
             "tie_rule", "output_dir", "llm", "common_random_numbers",
             "truthful_eps", "workers"});

  ExperimentConfig c;
  if (!root.contains("schema_version")) Fail("schema_version", "missing");
  c.schema_version = static_cast<int>(GetInt(root, "", "schema_version", 0));
  if (root.contains("experiment_seed")) {
    const Json& s = root["experiment_seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                   s.get<std::int64_t>() < 0)) {
      Fail("experiment_seed", "expected a non-negative integer");
    }
    c.experiment_seed = s.get<std::uint64_t>();
  }
  c.n_bidders = static_cast<int>(GetInt(root, "", "n_bidders", c.n_bidders));
  c.rounds_per_config = static_cast<int>(
      GetInt(root, "", "rounds_per_config", c.rounds_per_config));

  if (root.contains("prior")) {
    const Json& p = root["prior"];
    CheckKeys(p, "prior", {"lo", "hi"});
    c.prior = AtPath("prior", [&] {
      return ValuePrior(GetReal(p, "prior", "lo", 0.0),
                        GetReal(p, "prior", "hi", 1.0));
    });
  }

  if (!root.contains("strategies")) Fail("strategies", "missing");
  const Json& strategies = root["strategies"];
  if (strategies.is_string()) {
    if (strategies.get<std::string>() != "paper_default") {
      Fail("strategies", "unknown preset '" + strategies.get<std::string>() +
                             "' (expected 'paper_default' or a list)");
    }
    c.strategies = PaperDefaultStrategies();
  } else if (strategies.is_array()) {
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      ParseStrategyEntry(strategies[i], Index("strategies", i), c.strategies);
    }
  } else {
    Fail("strategies", "expected 'paper_default' or a list");
  }

  if (root.contains("backends")) {
    const Json& b = root["backends"];
    if (!b.is_array()) Fail("backends", "expected a list");
    for (std::size_t i = 0; i < b.size(); ++i) {
      c.backends.push_back(ParseBackend(b[i], Index("backends", i)));
    }
  } else {
    c.backends = {BackendSpec{}};
  }

  if (root.contains("tie_rule")) {
    c.tie_rule = AtPath("tie_rule", [&] {
      return ParseTieRule(GetString(root, "", "tie_rule", ""));
    });
  }
  c.output_dir = GetString(root, "", "output_dir", c.output_dir.string());
  if (root.contains("llm")) c.llm = ParseLlm(root["llm"], "llm");
  if (root.contains("common_random_numbers")) {
    c.common_random_numbers = GetBool(root, "", "common_random_numbers", true);
  }
  c.truthful_eps = GetReal(root, "", "truthful_eps", c.truthful_eps);
  c.workers = static_cast<int>(GetInt(root, "", "workers", c.workers));
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseExperimentConfig(ss.str());
}

std::string ConfigToJson(const ExperimentConfig& config) {
  return ConfigJson(config).dump(2);
}

std::string ConfigId(const DisclosureStrategy& s, const BackendSpec& b) {
  std::string id(ToString(s.family));
  if (s.family != StrategyFamily::kFullDisclosure) {
    id += "-d" + FormatDouble(s.disclosure_fraction);
  }
  if (s.tiered()) id += "-" + std::string(ToString(s.pooled_info));
  id += "-" + std::string(ToString(b.kind));
  if (b.kind != BackendKind::kLlm && !(b.scripted == ScriptedParams{})) {
    id += "-h" + FormatDouble(b.scripted.high_tier_estimate) + "-l" +
          FormatDouble(b.scripted.low_tier_estimate);
  }
  if (b.deviation) {
    id += "-dev" + FormatDouble(b.deviation->probability) + "x" +
          FormatDouble(b.deviation->delta);
    if (b.deviation->apply_with_average) id += "a";
  }
  return id;
}

GridExpansion ExpandGrid(const ExperimentConfig& config) {
  if (config.strategies.empty()) Fail("strategies", "must not be empty");
  if (config.backends.empty()) Fail("backends", "must not be empty");
  GridExpansion out;
  std::set<std::string> seen;
  for (const DisclosureStrategy& s : config.strategies) {
    for (const BackendSpec& b : config.backends) {
      std::string id = ConfigId(s, b);
      if (!seen.insert(id).second) {
        out.warnings.push_back("duplicate cell '" + id + "' ignored");
        continue;
      }
      out.cells.push_back(GridCell{id, s, b, LabelFor(id, s, b)});
    }
  }
  return out;
}

std::uint64_t RoundSeed(std::uint64_t experiment_seed,
                        std::string_view config_id, int round_index) {
  return StableHash(experiment_seed, config_id,
                    static_cast<std::uint64_t>(round_index));
}

std::uint64_t ValuationSeed(std::uint64_t experiment_seed,
                            std::uint64_t round_seed, int round_index,
                            bool common_random_numbers) {
  if (common_random_numbers) {
    return StableHash(experiment_seed, "common-valuations",
                      static_cast<std::uint64_t>(round_index));
  }
  return StableHash(round_seed, "valuations", 0);
}

RoundConfig MakeRoundConfig(const ExperimentConfig& config,
                            const GridCell& cell, int round_index) {
  RoundConfig rc;
  rc.config_id = cell.config_id;
  rc.round_index = round_index;
  rc.n_bidders = config.n_bidders;
  rc.prior = config.prior;
  rc.strategy = cell.strategy;
  rc.tie_rule = config.tie_rule;
  rc.backend = cell.backend;
  rc.round_seed = RoundSeed(config.experiment_seed, cell.config_id, round_index);
  rc.valuation_seed = ValuationSeed(config.experiment_seed, rc.round_seed,
                                    round_index, config.crn_enabled());
  return rc;
}

bool RunManifest::any_failed() const {
  return std::any_of(cells.begin(), cells.end(), [](const CellReport& c) {
    return c.summary.rounds_failed > 0;
  });
}

RunManifest RunExperiment(const ExperimentConfig& config,
                          const RunOptions& options) {
  config.Validate();
  const GridExpansion grid = ExpandGrid(config);

  std::shared_ptr<const LlmClient> llm_client = options.llm_client;
  if (config.uses_llm() && !llm_client) {
    llm_client = LlmClient::FromEnvironment(*config.llm);
  }
  EnsureWritable(config.output_dir);
  const auto resumable = ResumableCells(config);

  RunManifest manifest;
  manifest.output_dir = config.output_dir;
  manifest.manifest_json = config.output_dir / kManifestName;
  manifest.summary_csv = config.output_dir / kSummaryName;

  for (const GridCell& cell : grid.cells) {
    CellReport report;
    report.cell = cell;
    report.file = config.output_dir / (cell.config_id + ".jsonl");

    std::vector<RoundRecord> records;
    auto it = resumable.find(cell.config_id);
    if (it != resumable.end() && fs::exists(report.file) &&
        FileChecksum(report.file) == it->second) {
      records = ReadJsonl(report.file);
      report.resumed = true;
    } else {
      std::shared_ptr<const BidderAgent> agent;
      if (cell.backend.kind == BackendKind::kLlm) {
        agent = std::make_shared<LlmAgent>(llm_client);
      } else {
        agent = MakeAnalyticAgent(cell.backend, cell.strategy, config.n_bidders);
      }
      records = RunCellRounds(config, cell, *agent);
      WriteJsonl(report.file, records);
    }
    report.checksum = FileChecksum(report.file);
    report.records = static_cast<std::int64_t>(records.size());
    report.summary = AggregateCell(records, cell.label, config.truthful_eps);
    manifest.cells.push_back(report);
    WriteManifest(config, manifest.cells, /*complete=*/false);
    if (options.on_cell) options.on_cell(manifest.cells.back());
  }

  std::vector<MetricsSummary> rows;
  for (const CellReport& c : manifest.cells) rows.push_back(c.summary);
  std::ostringstream csv;
  WriteSummaryCsv(csv, rows);
  WriteTextAtomically(manifest.summary_csv, csv.str());
  WriteManifest(config, manifest.cells, /*complete=*/true);
  return manifest;
}

GroupBy ParseGroupBy(std::string_view text) {
  if (text == "threshold") return GroupBy::kThreshold;
  if (text == "strategy") return GroupBy::kStrategy;
  throw ConfigError("unknown group-by '" + std::string(text) +
                    "' (expected strategy or threshold)");
}

std::vector<MetricsSummary> ReportFromDirectory(const fs::path& dir,
                                                GroupBy group_by) {
  const fs::path manifest_path = dir / kManifestName;
  if (!fs::exists(manifest_path)) {
    throw IoError("no " + std::string(kManifestName) + " in " + dir.string());
  }
  const Json m = ReadJsonFile(manifest_path);
  if (!m.is_object() || !m.contains("cells") || !m.contains("config")) {
    throw IoError("malformed manifest " + manifest_path.string());
  }
  ExperimentConfig config;
  try {
    config = ParseExperimentConfig(m["config"].dump());
  } catch (const ConfigError& e) {
    throw IoError("manifest config echo is invalid: " + std::string(e.what()));
  }

  struct Loaded {
    GridCell cell;
    std::vector<RoundRecord> records;
  };
  std::vector<Loaded> loaded;
  for (const Json& c : m["cells"]) {
    const fs::path file = dir / c.at("file").get<std::string>();
    const std::string expected = c.at("checksum").get<std::string>();
    const std::string actual = FileChecksum(file);
    if (actual != expected) {
      throw ValidationError("checksum mismatch for " + file.string() +
                            ": manifest has " + expected + ", file has " +
                            actual);
    }
    ExperimentConfig one = config;
    one.strategies.clear();
    ParseStrategyEntry(c.at("strategy"), "cells.strategy", one.strategies);
    const BackendSpec backend = ParseBackend(c.at("backend"), "cells.backend");
    const std::string id = c.at("config_id").get<std::string>();
    loaded.push_back({GridCell{id, one.strategies.front(), backend,
                               LabelFor(id, one.strategies.front(), backend)},
                      ReadJsonl(file)});
  }

  std::vector<MetricsSummary> rows;
  if (group_by == GroupBy::kThreshold) {
    for (const Loaded& l : loaded) {
      rows.push_back(AggregateCell(l.records, l.cell.label, config.truthful_eps));
    }
    return rows;
  }

  // Pool every disclosure fraction of a (strategy, pooled_info, backend
  // config) combination, in first-seen order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Loaded*>> groups;
  for (const Loaded& l : loaded) {
    DisclosureStrategy key_strategy = l.cell.strategy;
    key_strategy.disclosure_fraction = 1.0;
    std::string key = ConfigId(key_strategy, l.cell.backend);
    if (l.cell.strategy.family != StrategyFamily::kFullDisclosure) {
      const std::string d = "-d1";
      key.erase(key.find(d), d.size());
    }
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&l);
  }
  for (const std::string& key : order) {
    const auto& members = groups[key];
    std::vector<RoundRecord> pooled;
    std::set<double> fractions;
    for (const Loaded* l : members) {
      pooled.insert(pooled.end(), l->records.begin(), l->records.end());
      fractions.insert(*l->cell.label.disclosure_fraction);
    }
    SummaryLabel label = members.front()->cell.label;
    label.config_id = key;
    if (fractions.size() != 1) label.disclosure_fraction.reset();
    rows.push_back(AggregatePooled(pooled, label, config.truthful_eps));
  }
  return rows;
}

}  // namespace sigauction
