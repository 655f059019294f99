// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// settlesim: run settlement scenarios from the command line.
//
//   settlesim run <scenario.json>        execute and write a run directory
//   settlesim gen <scenario.json>        write the generated instance only
//   settlesim compare <scenario.json>    greedy vs exhaustive report (stdout)
//   settlesim summarize <trace>          summary of an exported trace (stdout)
//
// Flags --seed, --t-end, --out, --mode and --format override the matching
// scenario fields. Exit status: 0 success, 1 run failure, 2 bad input.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "settlesim/scenario.hpp"

namespace {

using settlesim::Mode;
using settlesim::TraceFormat;

constexpr int kRunFailure = 1;
constexpr int kBadInput = 2;

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> t_end;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::vector<std::string> formats;
};

settlesim::Overrides to_overrides(const Flags& f) {
  settlesim::Overrides o;
  o.seed = f.seed;
  o.t_end = f.t_end;
  o.out = f.out;
  if (f.mode) o.mode = settlesim::parse_mode(*f.mode);
  if (!f.formats.empty()) {
    std::vector<TraceFormat> formats;
    for (const auto& s : f.formats) formats.push_back(settlesim::parse_trace_format(s));
    o.formats = std::move(formats);
  }
  return o;
}

void print_artifacts(const settlesim::RunArtifacts& a) {
  settlesim::Value report{{"dir", a.dir.string()}, {"files", a.file_hashes}};
  std::cout << report.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic settlement simulator"};
  app.require_subcommand(1);

  Flags flags;
  auto add_overrides = [&flags](CLI::App* cmd, bool formats) {
    cmd->add_option("--seed", flags.seed, "Override the scenario seed");
    cmd->add_option("--t-end", flags.t_end, "Override the run horizon (last tick)");
    cmd->add_option("--out", flags.out, "Override the output directory");
    cmd->add_option("--mode", flags.mode, "Override the mode")
        ->check(CLI::IsMember({"realtime", "batch", "both"}));
    if (formats) {
      cmd->add_option("--format", flags.formats, "Trace export format (repeatable)")
          ->check(CLI::IsMember({"ndjson", "csv"}));
    }
  };

  std::string scenario_path;
  std::string trace_path;
  std::optional<std::string> trace_format;

  auto* run = app.add_subcommand("run", "Execute a scenario and write its artifacts");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  add_overrides(run, true);

  auto* gen = app.add_subcommand("gen", "Materialize the workload without running it");
  gen->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  add_overrides(gen, false);

  auto* compare = app.add_subcommand("compare", "Compare greedy against the exhaustive oracle");
  compare->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  add_overrides(compare, false);

  auto* summarize = app.add_subcommand("summarize", "Summarize an exported trace");
  summarize->add_option("trace", trace_path, "Trace file (.ndjson or .csv)")->required();
  summarize->add_option("--format", trace_format, "Trace format (default: by extension)")
      ->check(CLI::IsMember({"ndjson", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : kBadInput;
  }

  settlesim::Scenario scenario;
  if (!summarize->parsed()) {
    try {
      scenario = settlesim::load_scenario(scenario_path, to_overrides(flags));
    } catch (const std::exception& err) {
      std::cerr << "settlesim: " << err.what() << '\n';
      return kBadInput;
    }
  }

  try {
    if (run->parsed()) {
      print_artifacts(settlesim::run_scenario(scenario));
    } else if (gen->parsed()) {
      print_artifacts(settlesim::generate_scenario(scenario));
    } else if (compare->parsed()) {
      std::cout << settlesim::compare_with_oracle(scenario).dump(2) << '\n';
    } else {
      std::optional<TraceFormat> format;
      if (trace_format) format = settlesim::parse_trace_format(*trace_format);
      std::cout << settlesim::summarize_trace_file(trace_path, format).dump(2) << '\n';
    }
  } catch (const settlesim::InstanceTooLarge& err) {
    std::cerr << "settlesim: " << scenario_path << ": " << err.what() << '\n';
    return kBadInput;
  } catch (const std::exception& err) {
    std::cerr << "settlesim: " << err.what() << '\n';
    return kRunFailure;
  }
  return 0;
}
