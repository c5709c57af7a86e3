// Copyright 2026 The slabprice Authors
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

// slabprice: scenario-driven slab pricing analyses that emit CSV.
//
//   slabprice <command> --scenario <path> [--out <dir>] [--seed <u64>] [--overwrite]
//
// Exit codes: 0 success, 2 usage, 3 schema/invariant, 4 infeasible,
// 5 numerical failure. Failures print "error[<category>]: <message>".

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slabprice/slabprice.hpp"

#ifndef SLABPRICE_SCENARIO_DIR
#define SLABPRICE_SCENARIO_DIR "scenarios"
#endif

namespace {

using slabprice::CsvTable;
using slabprice::ErrorCategory;

struct Options {
  std::string scenario;
  std::string out = "out";
  std::string scenario_dir = SLABPRICE_SCENARIO_DIR;
  std::optional<std::uint64_t> seed;
  bool overwrite = false;
};

slabprice::Scenario load(const Options& o) {
  if (o.scenario.empty()) {
    throw slabprice::Error(ErrorCategory::usage, "--scenario <path> is required");
  }
  return slabprice::parse_scenario(o.scenario);
}

void emit(const Options& o, const std::vector<CsvTable>& tables) {
  for (const CsvTable& t : tables) {
    std::cout << slabprice::write_csv(o.out, t, o.overwrite).string() << "\n";
  }
}

int run(const std::string& command, const Options& o) {
  if (command == "demand") {
    emit(o, slabprice::demand_curve_tables(load(o)));
  } else if (command == "respond") {
    emit(o, {slabprice::response_table(load(o))});
  } else if (command == "revenue") {
    emit(o, slabprice::revenue_tables(load(o)));
  } else if (command == "optimize") {
    emit(o, {slabprice::slab_study_table(load(o))});
  } else if (command == "equilibrium") {
    emit(o, slabprice::equilibrium_tables(load(o)));
  } else if (command == "simulate") {
    emit(o, {slabprice::simulation_table(load(o), o.seed)});
  } else if (command == "reproduce") {
    const auto result = slabprice::reproduce(o.scenario_dir, o.out, o.seed, o.overwrite);
    for (const auto& p : result.written) std::cout << p.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slab pricing analyses: demand, price response, expected revenue"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Options o;
  app.add_option("--scenario", o.scenario, "Scenario file");
  app.add_option("--out", o.out, "Output directory for CSV files");
  app.add_option("--seed", o.seed, "Seed overriding the scenario's simulation seed");
  app.add_flag("--overwrite", o.overwrite, "Replace existing output files");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"demand", "Demand curves for both commodities"},
      {"respond", "Price-response properties table"},
      {"revenue", "Expected revenue per consumer and slab"},
      {"optimize", "Exhaustive slab-structure search"},
      {"equilibrium", "Supply-line fit and equilibrium price/quantity"},
      {"simulate", "Monte Carlo check of expected revenue"},
      {"reproduce", "Run every analysis on the bundled scenarios"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (name == "reproduce") {
      sub->add_option("--scenario-dir", o.scenario_dir, "Directory holding the bundled scenarios");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "error[usage]: " << e.what() << "\n";
    return slabprice::exit_code(ErrorCategory::usage);
  }

  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const slabprice::Error& e) {
    std::cerr << "error[" << slabprice::to_string(e.category()) << "]: " << e.what() << "\n";
    return slabprice::exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error[numerical]: " << e.what() << "\n";
    return slabprice::exit_code(ErrorCategory::numerical);
  }
}
