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

// Scenario documents: offers, consumers and the analyses to run on them.
//
// Scenarios are JSON objects; unknown keys are rejected at every level. Schema
// problems raise ErrorCategory::schema with the offending field path, value
// range problems raise ErrorCategory::invalid_argument naming the invariant.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "slabprice/demand.hpp"
#include "slabprice/equilibrium.hpp"
#include "slabprice/error.hpp"

namespace slabprice {

inline constexpr int kScenarioVersion = 1;

struct PriceGrid {
  double start = 1.0;
  double stop = 50.0;
  double step = 1.0;

  std::vector<double> points() const {
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
  }

  bool operator==(const PriceGrid&) const = default;
};

// Demand curves for every consumer, with the consumer's own minimums
// ("constrained") and with `unconstrained_min` for both commodities.
struct CurveRequest {
  PriceGrid grid;
  std::array<double, 2> unconstrained_min{1.0, 1.0};

  bool operator==(const CurveRequest&) const = default;
};

struct ResponseRequest {
  std::vector<double> prices;
  std::vector<double> reference_prices{0.01, 0.001};
  std::size_t slab = 0;

  bool operator==(const ResponseRequest&) const = default;
};

struct OptimizerRequest {
  std::size_t consumer = 0;
  std::size_t max_slabs = 4;
  std::vector<double> first_slab_prices;
  double discount_per_slab = 0.05;
  double lambda = 0.5;
  std::size_t attention_span = 2;

  bool operator==(const OptimizerRequest&) const = default;
};

struct SupplyRequest {
  int commodity = 1;
  std::vector<PriceQuantity> pairs;
  FitMethod method = FitMethod::two_point;

  bool operator==(const SupplyRequest&) const = default;
};

struct EquilibriumRequest {
  std::vector<SupplyRequest> supply;
  double q_lo = 1.0;
  double q_hi = 1000.0;
  std::array<double, 2> unconstrained_min{1.0, 1.0};

  bool operator==(const EquilibriumRequest&) const = default;
};

struct SimulationRequest {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;

  bool operator==(const SimulationRequest&) const = default;
};

struct Analysis {
  std::optional<CurveRequest> curves;
  std::optional<ResponseRequest> response;
  std::optional<OptimizerRequest> optimizer;
  std::optional<EquilibriumRequest> equilibrium;
  std::optional<SimulationRequest> simulation;

  bool operator==(const Analysis&) const = default;
};

struct Scenario {
  int version = kScenarioVersion;
  std::string name;
  std::string description;
  std::string currency = "INR";
  Offer offer1;
  Offer offer2;
  std::vector<Consumer> consumers;
  Analysis analysis;

  DomainSpec domain() const { return make_domain(offer1, offer2); }

  bool operator==(const Scenario&) const = default;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  fail(ErrorCategory::schema, path + ": " + what);
}

[[noreturn]] inline void invariant_error(const std::string& path, const std::string& what) {
  fail(ErrorCategory::invalid_argument, path + ": " + what);
}

inline std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Read access to one JSON object that rejects unknown keys up front.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, std::initializer_list<std::string_view> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema_error(path_.empty() ? "<root>" : path_, "expected an object");
    for (const auto& item : j_.items()) {
      bool known = false;
      for (std::string_view a : allowed) known = known || item.key() == a;
      if (!known) schema_error(join(path_, item.key()), "unknown field");
    }
  }

  bool has(std::string_view key) const { return j_.contains(key); }
  const std::string& path() const { return path_; }
  std::string at_path(std::string_view key) const { return join(path_, key); }

  const json& required(std::string_view key) const {
    if (!j_.contains(key)) schema_error(join(path_, key), "missing required field");
    return j_.at(std::string(key));
  }

  double number(std::string_view key) const { return as_number(required(key), join(path_, key)); }
  double number_or(std::string_view key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t unsigned_integer(std::string_view key) const {
    const json& v = required(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      schema_error(join(path_, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t unsigned_or(std::string_view key, std::uint64_t fallback) const {
    return has(key) ? unsigned_integer(key) : fallback;
  }

  std::string string(std::string_view key) const {
    const json& v = required(key);
    if (!v.is_string()) schema_error(join(path_, key), "expected a string");
    return v.get<std::string>();
  }
  std::string string_or(std::string_view key, std::string fallback) const {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(std::string_view key) const {
    const json& v = required(key);
    const std::string p = join(path_, key);
    if (!v.is_array()) schema_error(p, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], index(p, i)));
    return out;
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) schema_error(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema_error(path, "expected a finite number");
    return d;
  }

 private:
  const json& j_;
  std::string path_;
};

inline std::array<double, 2> read_pair(const ObjectReader& r, std::string_view key,
                                       std::array<double, 2> fallback) {
  if (!r.has(key)) return fallback;
  const std::vector<double> v = r.numbers(key);
  if (v.size() != 2) schema_error(r.at_path(key), "expected exactly two numbers");
  return {v[0], v[1]};
}

inline Offer read_offer(const json& j, const std::string& path) {
  ObjectReader r(j, path, {"commodity", "unit", "slabs"});
  Offer offer;
  offer.commodity_id = r.string("commodity");
  offer.unit_label = r.string("unit");
  const json& slabs = r.required("slabs");
  const std::string sp = r.at_path("slabs");
  if (!slabs.is_array() || slabs.empty()) schema_error(sp, "expected a non-empty array");
  for (std::size_t k = 0; k < slabs.size(); ++k) {
    ObjectReader s(slabs[k], index(sp, k), {"unit_price", "min_qty"});
    offer.slabs.push_back({s.number("unit_price"), s.number("min_qty")});
    if (!(offer.slabs.back().unit_price > 0.0)) {
      invariant_error(s.at_path("unit_price"), "unit_price must be positive");
    }
    if (!(offer.slabs.back().min_qty > 0.0)) {
      invariant_error(s.at_path("min_qty"), "min_qty must be positive");
    }
    if (k > 0 && !(offer.slabs[k].min_qty > offer.slabs[k - 1].min_qty)) {
      invariant_error(s.at_path("min_qty"), "slab min_qty must be strictly increasing");
    }
  }
  if (offer.unit_label.empty()) invariant_error(r.at_path("unit"), "unit label must be declared");
  return offer;
}

inline void check_unit_interval(const std::vector<double>& v, const std::string& path,
                                std::string_view name, std::size_t max_len) {
  if (v.empty()) invariant_error(path, std::string(name) + " needs at least one entry");
  if (v.size() > max_len) {
    invariant_error(path, std::string(name) + " references slab " + std::to_string(v.size()) +
                              " but the offer has " + std::to_string(max_len));
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) {
      invariant_error(index(path, i), std::string(name) + " must lie in [0,1]");
    }
  }
}

inline Consumer read_consumer(const json& j, const std::string& path, const Offer& offer1,
                              const Offer& offer2) {
  ObjectReader r(j, path,
                 {"budget", "mu", "phi", "x1_min", "x2_min", "x1_max", "x2_max", "attention_span",
                  "lambda"});
  Consumer c;
  c.budget = r.number("budget");
  c.mu = r.numbers("mu");
  c.phi = r.numbers("phi");
  c.x1_min = r.number("x1_min");
  c.x2_min = r.number("x2_min");
  c.x1_max = r.number("x1_max");
  c.x2_max = r.number("x2_max");
  c.attention_span = r.unsigned_integer("attention_span");
  c.lambda = r.numbers("lambda");

  if (!(c.budget > 0.0)) invariant_error(r.at_path("budget"), "budget must be positive");
  check_unit_interval(c.mu, r.at_path("mu"), "mu", offer1.slabs.size());
  check_unit_interval(c.phi, r.at_path("phi"), "phi", offer2.slabs.size());
  check_unit_interval(c.lambda, r.at_path("lambda"), "lambda", offer1.slabs.size());
  if (c.x1_min < 0.0) invariant_error(r.at_path("x1_min"), "x1_min must be non-negative");
  if (c.x2_min < 0.0) invariant_error(r.at_path("x2_min"), "x2_min must be non-negative");
  if (!(c.x1_min < c.x1_max)) invariant_error(r.at_path("x1_max"), "x1_min must be below x1_max");
  if (!(c.x2_min < c.x2_max)) invariant_error(r.at_path("x2_max"), "x2_min must be below x2_max");
  if (c.attention_span < 1) {
    invariant_error(r.at_path("attention_span"), "attention_span must be at least 1");
  }
  return c;
}

inline PriceGrid read_grid(const json& j, const std::string& path) {
  ObjectReader r(j, path, {"start", "stop", "step"});
  PriceGrid g{r.number("start"), r.number("stop"), r.number("step")};
  if (!(g.start > 0.0)) invariant_error(r.at_path("start"), "prices must be positive");
  if (!(g.stop >= g.start)) invariant_error(r.at_path("stop"), "stop must not precede start");
  if (!(g.step > 0.0)) invariant_error(r.at_path("step"), "step must be positive");
  return g;
}

inline void check_positive_prices(const std::vector<double>& v, const std::string& path,
                                  bool allow_empty = false) {
  if (v.empty() && !allow_empty) invariant_error(path, "price list is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) invariant_error(index(path, i), "prices must be positive");
  }
}

inline FitMethod read_method(const ObjectReader& r) {
  const std::string m = r.string_or("method", "two_point");
  if (m == "two_point") return FitMethod::two_point;
  if (m == "least_squares") return FitMethod::least_squares;
  schema_error(r.at_path("method"), "expected \"two_point\" or \"least_squares\"");
}

inline Analysis read_analysis(const json& j, const std::string& path, const Scenario& s) {
  ObjectReader r(j, path, {"curves", "response", "optimizer", "equilibrium", "simulation"});
  Analysis a;
  if (r.has("curves")) {
    ObjectReader c(r.required("curves"), r.at_path("curves"), {"grid", "unconstrained_min"});
    CurveRequest req;
    req.grid = read_grid(c.required("grid"), c.at_path("grid"));
    req.unconstrained_min = read_pair(c, "unconstrained_min", req.unconstrained_min);
    a.curves = req;
  }
  if (r.has("response")) {
    ObjectReader c(r.required("response"), r.at_path("response"),
                   {"prices", "reference_prices", "slab"});
    ResponseRequest req;
    req.prices = c.numbers("prices");
    check_positive_prices(req.prices, c.at_path("prices"));
    if (c.has("reference_prices")) req.reference_prices = c.numbers("reference_prices");
    check_positive_prices(req.reference_prices, c.at_path("reference_prices"), true);
    req.slab = c.unsigned_or("slab", 0);
    if (req.slab >= s.offer1.slabs.size()) {
      invariant_error(c.at_path("slab"), "references a slab the offer does not have");
    }
    a.response = req;
  }
  if (r.has("optimizer")) {
    ObjectReader c(r.required("optimizer"), r.at_path("optimizer"),
                   {"consumer", "max_slabs", "first_slab_prices", "discount_per_slab", "lambda",
                    "attention_span"});
    OptimizerRequest req;
    req.consumer = c.unsigned_or("consumer", 0);
    req.max_slabs = c.unsigned_integer("max_slabs");
    req.first_slab_prices = c.numbers("first_slab_prices");
    req.discount_per_slab = c.number("discount_per_slab");
    req.lambda = c.number("lambda");
    req.attention_span = c.unsigned_integer("attention_span");
    if (req.consumer >= s.consumers.size()) {
      invariant_error(c.at_path("consumer"), "references a consumer that does not exist");
    }
    if (req.max_slabs < 1) invariant_error(c.at_path("max_slabs"), "max_slabs must be at least 1");
    check_positive_prices(req.first_slab_prices, c.at_path("first_slab_prices"));
    if (!(req.discount_per_slab > 0.0 && req.discount_per_slab < 1.0)) {
      invariant_error(c.at_path("discount_per_slab"), "discount must lie in (0,1)");
    }
    if (!(req.lambda >= 0.0 && req.lambda <= 1.0)) {
      invariant_error(c.at_path("lambda"), "lambda must lie in [0,1]");
    }
    if (req.attention_span < 1) {
      invariant_error(c.at_path("attention_span"), "attention_span must be at least 1");
    }
    a.optimizer = req;
  }
  if (r.has("equilibrium")) {
    ObjectReader c(r.required("equilibrium"), r.at_path("equilibrium"),
                   {"supply", "bracket", "unconstrained_min"});
    EquilibriumRequest req;
    const json& supply = c.required("supply");
    const std::string sp = c.at_path("supply");
    if (!supply.is_array() || supply.empty()) schema_error(sp, "expected a non-empty array");
    for (std::size_t i = 0; i < supply.size(); ++i) {
      ObjectReader e(supply[i], index(sp, i), {"commodity", "pairs", "method"});
      SupplyRequest sr;
      const std::uint64_t commodity = e.unsigned_integer("commodity");
      if (commodity != 1 && commodity != 2) {
        invariant_error(e.at_path("commodity"), "commodity must be 1 or 2");
      }
      sr.commodity = static_cast<int>(commodity);
      sr.method = read_method(e);
      const json& pairs = e.required("pairs");
      const std::string pp = e.at_path("pairs");
      if (!pairs.is_array()) schema_error(pp, "expected an array of [price, quantity]");
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::string kp = index(pp, k);
        if (!pairs[k].is_array() || pairs[k].size() != 2) {
          schema_error(kp, "expected [price, quantity]");
        }
        sr.pairs.push_back({ObjectReader::as_number(pairs[k][0], index(kp, 0)),
                            ObjectReader::as_number(pairs[k][1], index(kp, 1))});
      }
      if (sr.pairs.size() < 2) invariant_error(pp, "supply fit needs at least two pairs");
      req.supply.push_back(std::move(sr));
    }
    const std::array<double, 2> bracket = read_pair(c, "bracket", {req.q_lo, req.q_hi});
    req.q_lo = bracket[0];
    req.q_hi = bracket[1];
    if (!(req.q_lo > 0.0 && req.q_lo < req.q_hi)) {
      invariant_error(c.at_path("bracket"), "bracket must satisfy 0 < q_lo < q_hi");
    }
    req.unconstrained_min = read_pair(c, "unconstrained_min", req.unconstrained_min);
    a.equilibrium = req;
  }
  if (r.has("simulation")) {
    ObjectReader c(r.required("simulation"), r.at_path("simulation"), {"trials", "seed"});
    SimulationRequest req;
    req.trials = c.unsigned_or("trials", req.trials);
    req.seed = c.unsigned_or("seed", req.seed);
    if (req.trials < 1) invariant_error(c.at_path("trials"), "trials must be at least 1");
    a.simulation = req;
  }
  return a;
}

inline json grid_to_json(const PriceGrid& g) {
  return json{{"start", g.start}, {"stop", g.stop}, {"step", g.step}};
}

inline json offer_to_json(const Offer& o) {
  json slabs = json::array();
  for (const Slab& s : o.slabs) slabs.push_back({{"unit_price", s.unit_price}, {"min_qty", s.min_qty}});
  return json{{"commodity", o.commodity_id}, {"unit", o.unit_label}, {"slabs", slabs}};
}

}  // namespace detail

inline Scenario parse_scenario_text(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    detail::schema_error("<root>", std::string("not valid JSON (") + e.what() + ")");
  }
  detail::ObjectReader r(doc, "",
                         {"version", "name", "description", "currency", "offers", "consumers",
                          "analysis"});
  Scenario s;
  const std::uint64_t version = r.unsigned_integer("version");
  if (version != kScenarioVersion) {
    detail::schema_error("version", "unsupported version " + std::to_string(version));
  }
  s.version = static_cast<int>(version);
  s.name = r.string("name");
  s.description = r.string_or("description", "");
  s.currency = r.string_or("currency", "INR");

  const json& offers = r.required("offers");
  if (!offers.is_array() || offers.size() != 2) {
    detail::schema_error("offers", "expected exactly two offers");
  }
  s.offer1 = detail::read_offer(offers[0], "offers[0]");
  s.offer2 = detail::read_offer(offers[1], "offers[1]");

  const json& consumers = r.required("consumers");
  if (!consumers.is_array() || consumers.empty()) {
    detail::schema_error("consumers", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < consumers.size(); ++i) {
    s.consumers.push_back(
        detail::read_consumer(consumers[i], detail::index("consumers", i), s.offer1, s.offer2));
  }
  if (r.has("analysis")) s.analysis = detail::read_analysis(r.required("analysis"), "analysis", s);
  return s;
}

inline Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail(ErrorCategory::usage, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const Error& e) {
    throw Error(e.category(), path + ": " + e.what());
  }
}

inline std::string serialize_scenario(const Scenario& s) {
  using detail::json;
  json doc;
  doc["version"] = s.version;
  doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  doc["currency"] = s.currency;
  doc["offers"] = json::array({detail::offer_to_json(s.offer1), detail::offer_to_json(s.offer2)});
  json consumers = json::array();
  for (const Consumer& c : s.consumers) {
    consumers.push_back({{"budget", c.budget},
                         {"mu", c.mu},
                         {"phi", c.phi},
                         {"x1_min", c.x1_min},
                         {"x2_min", c.x2_min},
                         {"x1_max", c.x1_max},
                         {"x2_max", c.x2_max},
                         {"attention_span", c.attention_span},
                         {"lambda", c.lambda}});
  }
  doc["consumers"] = consumers;

  json analysis = json::object();
  const Analysis& a = s.analysis;
  if (a.curves) {
    analysis["curves"] = {{"grid", detail::grid_to_json(a.curves->grid)},
                          {"unconstrained_min", a.curves->unconstrained_min}};
  }
  if (a.response) {
    analysis["response"] = {{"prices", a.response->prices},
                            {"reference_prices", a.response->reference_prices},
                            {"slab", a.response->slab}};
  }
  if (a.optimizer) {
    const OptimizerRequest& o = *a.optimizer;
    analysis["optimizer"] = {{"consumer", o.consumer},
                             {"max_slabs", o.max_slabs},
                             {"first_slab_prices", o.first_slab_prices},
                             {"discount_per_slab", o.discount_per_slab},
                             {"lambda", o.lambda},
                             {"attention_span", o.attention_span}};
  }
  if (a.equilibrium) {
    json supply = json::array();
    for (const SupplyRequest& sr : a.equilibrium->supply) {
      json pairs = json::array();
      for (const PriceQuantity& pq : sr.pairs) pairs.push_back({pq.price, pq.quantity});
      supply.push_back(
          {{"commodity", sr.commodity}, {"pairs", pairs}, {"method", to_string(sr.method)}});
    }
    analysis["equilibrium"] = {{"supply", supply},
                               {"bracket", {a.equilibrium->q_lo, a.equilibrium->q_hi}},
                               {"unconstrained_min", a.equilibrium->unconstrained_min}};
  }
  if (a.simulation) {
    analysis["simulation"] = {{"trials", a.simulation->trials}, {"seed", a.simulation->seed}};
  }
  if (!analysis.empty()) doc["analysis"] = analysis;
  return doc.dump(2) + "\n";
}

}  // namespace slabprice
