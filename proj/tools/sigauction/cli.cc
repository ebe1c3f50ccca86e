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

#include "sigauction/cli.h"

#include <cstdint>
#include <optional>

#include "CLI11.hpp"
#include "sigauction/error.h"
#include "sigauction/experiment.h"
#include "sigauction/format.h"
#include "sigauction/stub_server.h"

namespace sigauction::cli {
namespace {

struct RunFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::string base_url;
};

struct ReportFlags {
  std::string in;
  std::string group_by = "threshold";
  std::string format = "csv";
};

struct StubFlags {
  std::string host = "127.0.0.1";
  int port = 8089;
  std::string mode = "scripted";
  int malformed_before_valid = 0;
  bool fenced = false;
};

std::string Percent(double v) { return FormatDouble(v) + "%"; }

int CmdRun(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = LoadExperimentConfig(flags.config);
  if (!flags.out.empty()) config.output_dir = flags.out;
  if (flags.seed) config.experiment_seed = *flags.seed;
  if (!flags.backend.empty()) {
    BackendSpec spec;
    spec.kind = ParseBackendKind(flags.backend);
    config.backends = {spec};
  }
  if (!flags.base_url.empty()) {
    if (!config.llm) config.llm = LlmConfig{};
    config.llm->base_url = flags.base_url;
  }
  if (config.uses_llm() && !config.llm) config.llm = LlmConfig{};
  config.Validate();

  const GridExpansion grid = ExpandGrid(config);
  for (const std::string& w : grid.warnings) err << "warning: " << w << "\n";

  RunOptions options;
  options.on_cell = [&out](const CellReport& c) {
    const MetricsSummary& s = c.summary;
    out << c.cell.config_id << ": rounds_ok=" << s.rounds_ok
        << " rounds_failed=" << s.rounds_failed;
    if (s.empty()) {
      out << " (no successful rounds)";
    } else {
      out << " mean_revenue=" << FormatDouble(s.mean_revenue)
          << " mean_welfare=" << FormatDouble(s.mean_welfare)
          << " truthful=" << Percent(s.pct_truthful)
          << " over=" << Percent(s.pct_over)
          << " under=" << Percent(s.pct_under);
    }
    if (c.resumed) out << " [resumed]";
    out << "\n";
  };
  const RunManifest manifest = RunExperiment(config, options);
  out << manifest.cells.size() << " cells written to "
      << manifest.output_dir.string() << "\n";
  if (manifest.any_failed()) {
    err << "error: some rounds failed; see failure entries in the JSONL "
           "records\n";
    return kExitRoundsFailed;
  }
  return kExitOk;
}

int CmdReport(const ReportFlags& flags, std::ostream& out) {
  if (flags.format != "csv") {
    throw ConfigError("--format: only csv is supported");
  }
  const auto rows = ReportFromDirectory(flags.in, ParseGroupBy(flags.group_by));
  WriteSummaryCsv(out, rows);
  return kExitOk;
}

int CmdValidate(const std::string& path, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = LoadExperimentConfig(path);
  const GridExpansion grid = ExpandGrid(config);
  for (const std::string& w : grid.warnings) err << "warning: " << w << "\n";
  out << grid.cells.size() << " cells x " << config.rounds_per_config
      << " rounds, " << config.n_bidders << " bidders, seed "
      << config.experiment_seed
      << (config.crn_enabled() ? ", common random numbers" : "") << "\n";
  for (const GridCell& c : grid.cells) out << "  " << c.config_id << "\n";
  return kExitOk;
}

int CmdStubServer(const StubFlags& flags, std::ostream& out) {
  StubOptions options;
  options.mode = ParseStubMode(flags.mode);
  options.malformed_before_valid = flags.malformed_before_valid;
  options.fenced = flags.fenced;
  StubLlmServer server(options);
  out << "stub chat-completions endpoint on http://" << flags.host << ":"
      << flags.port << "/v1 (mode " << flags.mode << ")" << std::endl;
  server.ServeForever(flags.host, flags.port);
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Signaling strategies in sealed-bid second-price auctions",
               "sigauction"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run an experiment grid");
  run->add_option("--config", run_flags.config, "Config file (JSON)")
      ->required();
  run->add_option("--out", run_flags.out, "Output directory");
  run->add_option("--seed", run_flags.seed, "Experiment seed");
  run->add_option("--backend", run_flags.backend,
                  "Use a single backend: oracle_truthful, scripted_paper, "
                  "rational_bayes or llm");
  run->add_option("--base-url", run_flags.base_url,
                  "Chat-completions base URL for the llm backend");

  ReportFlags report_flags;
  auto* report = app.add_subcommand("report", "Re-aggregate a run directory");
  report->add_option("--in", report_flags.in, "Run directory")->required();
  report->add_option("--group-by", report_flags.group_by,
                     "threshold (one row per cell) or strategy (pool "
                     "thresholds)");
  report->add_option("--format", report_flags.format, "Output format (csv)");

  std::string validate_config;
  auto* validate =
      app.add_subcommand("validate", "Check a config and print its grid");
  validate->add_option("--config", validate_config, "Config file (JSON)")
      ->required();

  StubFlags stub_flags;
  auto* stub = app.add_subcommand("stub-server",
                                  "Serve a local chat-completions test double");
  stub->add_option("--host", stub_flags.host, "Bind address");
  stub->add_option("--port", stub_flags.port, "Port");
  stub->add_option("--mode", stub_flags.mode,
                   "scripted, out_of_range or garbage");
  stub->add_option("--malformed-before-valid",
                   stub_flags.malformed_before_valid,
                   "Malformed replies per bidder before a valid one");
  stub->add_flag("--fenced", stub_flags.fenced,
                 "Wrap replies in prose and a code fence");

  std::vector<std::string> argv_storage = {"sigauction"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return CmdRun(run_flags, out, err);
    if (*report) return CmdReport(report_flags, out);
    if (*validate) return CmdValidate(validate_config, out, err);
    if (*stub) return CmdStubServer(stub_flags, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sigauction::cli
