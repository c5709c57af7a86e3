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

#include "slabprice/commands.hpp"
#include "slabprice/csv.hpp"
#include "slabprice/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace slabprice {
namespace {

namespace fs = std::filesystem;

const fs::path kScenarios = SLABPRICE_SCENARIO_DIR;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(SLABPRICE_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string minimal(const std::string& consumer_extra = "", const std::string& top_extra = "") {
  return R"({"version": 1, "name": "tiny", )" + top_extra +
         R"("offers": [{"commodity": "x1", "unit": "g", "slabs": [{"unit_price": 0.175, "min_qty": 200}]},
                       {"commodity": "x2", "unit": "g", "slabs": [{"unit_price": 0.19, "min_qty": 200}]}],
  "consumers": [{"budget": 1000, "mu": [0.5], "phi": [0.5], "x1_min": 200, "x2_min": 200,
                 "x1_max": 5500, "x2_max": 5300, "attention_span": 1, "lambda": [)" +
         (consumer_extra.empty() ? "0.6" : consumer_extra) + "]}]}";
}

ErrorCategory category_of(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCategory::usage;
}

TEST(Scenario, BundledConvexMarket) {
  const Scenario s = load_bundled(kScenarios, "grocery_convex");
  ASSERT_EQ(s.consumers.size(), 9u);
  EXPECT_EQ(s.domain().kind, DomainKind::convex);
  EXPECT_DOUBLE_EQ(s.consumers[0].mu[0], 0.1);
  EXPECT_DOUBLE_EQ(s.consumers[8].mu[0], 0.9);
  EXPECT_EQ(s.offer1.slabs[0].unit_price, 0.175);
  ASSERT_TRUE(s.analysis.equilibrium.has_value());
  EXPECT_EQ(s.analysis.equilibrium->supply.size(), 2u);
}

TEST(Scenario, EveryBundledScenarioParsesAndRoundTrips) {
  for (const std::string& name : bundled_scenarios()) {
    const Scenario s = load_bundled(kScenarios, name);
    EXPECT_EQ(s.name, name);
    EXPECT_EQ(parse_scenario_text(serialize_scenario(s)), s) << name;
  }
  EXPECT_EQ(load_bundled(kScenarios, "grocery_mixed").domain().kind, DomainKind::mixed);
  EXPECT_EQ(load_bundled(kScenarios, "grocery_nonconvex").domain().kind, DomainKind::non_convex);
}

TEST(Scenario, SchemaErrors) {
  EXPECT_EQ(category_of(""), ErrorCategory::schema);
  EXPECT_EQ(category_of("[]"), ErrorCategory::schema);
  EXPECT_EQ(category_of(minimal("", R"("colour": "red", )")), ErrorCategory::schema);
  EXPECT_EQ(category_of(minimal("\"half\"")), ErrorCategory::schema);
  EXPECT_EQ(category_of(R"({"version": 2, "name": "x"})"), ErrorCategory::schema);
}

TEST(Scenario, InvariantErrorNamesTheField) {
  try {
    parse_scenario_text(minimal("1.2"));
    FAIL() << "expected an invariant error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::invalid_argument);
    EXPECT_EQ(exit_code(e.category()), 3);
    EXPECT_NE(std::string(e.what()).find("lambda"), std::string::npos) << e.what();
  }
}

TEST(Scenario, MinimalParses) {
  const Scenario s = parse_scenario_text(minimal());
  EXPECT_EQ(s.consumers.size(), 1u);
  EXPECT_EQ(s.currency, "INR");
  EXPECT_FALSE(s.analysis.curves.has_value());
}

TEST(Scenario, MissingFileIsUsageError) {
  try {
    parse_scenario((fs::path(SLABPRICE_TEST_TMP) / "nope.scn").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::usage);
  }
}

TEST(Csv, Formatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(2848.5714285714286), "2848.571429");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Csv, DemandCurveDimensions) {
  const std::vector<CsvTable> tables = demand_curve_tables(load_bundled(kScenarios, "grocery_convex"));
  ASSERT_EQ(tables.size(), 2u);
  for (const CsvTable& t : tables) {
    EXPECT_EQ(t.rows.size(), 50u);
    EXPECT_EQ(t.header.size(), 19u);
    for (const auto& row : t.rows) ASSERT_EQ(row.size(), 19u);
  }
  EXPECT_EQ(tables[0].header[1], "mu=0.1 constrained");
}

TEST(Csv, SingleConsumerRevenueTable) {
  const std::vector<CsvTable> tables = revenue_tables(parse_scenario_text(minimal()));
  ASSERT_EQ(tables.size(), 2u);
  EXPECT_EQ(tables[0].rows.size(), 1u);
}

TEST(Csv, WritesAreByteIdenticalAndRefuseOverwrite) {
  const fs::path dir = fresh_dir("csv");
  const Scenario s = load_bundled(kScenarios, "grocery_convex");
  const CsvTable t = response_table(s);
  const fs::path p = write_csv(dir, t, false);
  const std::string first = slurp(p);
  try {
    write_csv(dir, t, false);
    FAIL() << "expected overwrite conflict";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::usage);
  }
  write_csv(dir, response_table(load_bundled(kScenarios, "grocery_convex")), true);
  EXPECT_EQ(slurp(p), first);
  EXPECT_EQ(first, to_csv(t));
}

}  // namespace
}  // namespace slabprice
