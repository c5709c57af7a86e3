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

// Table builders behind each CLI subcommand, and the full reproduction
// battery. Every builder is a pure function of the scenario (and seed), so
// repeated runs produce byte-identical CSV.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slabprice/csv.hpp"
#include "slabprice/demand.hpp"
#include "slabprice/equilibrium.hpp"
#include "slabprice/error.hpp"
#include "slabprice/price_response.hpp"
#include "slabprice/revenue.hpp"
#include "slabprice/scenario.hpp"
#include "slabprice/simulate.hpp"

namespace slabprice {

namespace detail {

inline std::string cell(double v) { return format_number(v); }
inline std::string cell(bool v) { return v ? "true" : "false"; }
inline std::string cell(std::size_t v) { return std::to_string(v); }

// Response of commodity `commodity` (1 or 2) at first-slab prices, with the
// given own/other minimums.
inline ResponseContext commodity_context(const Scenario& s, const Consumer& c, int commodity,
                                         double own_min, double other_min) {
  ResponseContext ctx;
  ctx.budget = c.budget;
  ctx.own_min = own_min;
  ctx.other_min = other_min;
  if (commodity == 1) {
    ctx.motive = motive_at(c.mu, 0);
    ctx.other_price = s.offer2.slabs.front().unit_price;
  } else {
    ctx.motive = motive_at(c.phi, 0);
    ctx.other_price = s.offer1.slabs.front().unit_price;
  }
  return ctx;
}

template <class T>
const T& need(const std::optional<T>& request, const char* what) {
  if (!request) fail(ErrorCategory::schema, std::string("analysis.") + what + ": missing request");
  return *request;
}

}  // namespace detail

// Demand curves for both commodities: price, then per consumer a column with
// the consumer's minimums and one with the unconstrained minimums.
inline std::vector<CsvTable> demand_curve_tables(const Scenario& s) {
  const CurveRequest& req = detail::need(s.analysis.curves, "curves");
  const std::vector<double> prices = req.grid.points();
  std::vector<CsvTable> out;
  for (int commodity : {1, 2}) {
    CsvTable t;
    t.name = "curves_x" + std::to_string(commodity);
    t.header.push_back("price");
    std::vector<ResponseContext> constrained, unconstrained;
    for (const Consumer& c : s.consumers) {
      const double own = commodity == 1 ? c.x1_min : c.x2_min;
      const double other = commodity == 1 ? c.x2_min : c.x1_min;
      const double u_own = req.unconstrained_min[commodity - 1];
      const double u_other = req.unconstrained_min[2 - commodity];
      constrained.push_back(detail::commodity_context(s, c, commodity, own, other));
      unconstrained.push_back(detail::commodity_context(s, c, commodity, u_own, u_other));
      const std::string label =
          (commodity == 1 ? "mu=" : "phi=") + format_number(constrained.back().motive);
      t.header.push_back(label + " constrained");
      t.header.push_back(label + " unconstrained");
    }
    for (double p : prices) {
      std::vector<std::string> row{detail::cell(p)};
      for (std::size_t i = 0; i < constrained.size(); ++i) {
        row.push_back(detail::cell(price_response(constrained[i], p).quantity));
        row.push_back(detail::cell(price_response(unconstrained[i], p).quantity));
      }
      t.add_row(std::move(row));
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Response, slope, hazard rate, elasticity and willingness to pay per consumer
// and price on the requested slab. Undefined quantities are left empty.
inline CsvTable response_table(const Scenario& s) {
  const ResponseRequest& req = detail::need(s.analysis.response, "response");
  const DomainSpec domain = s.domain();
  CsvTable t;
  t.name = "response";
  t.header = {"consumer", "slab", "motive", "price", "demand", "infeasible", "slope",
              "hazard_rate", "elasticity"};
  for (double r : req.reference_prices) t.header.push_back("wtp@" + format_number(r));
  for (std::size_t i = 0; i < s.consumers.size(); ++i) {
    const ResponseContext ctx = build_plan(s.consumers[i], domain).slabs.at(req.slab).context;
    for (double p : req.prices) {
      const DemandValue x = price_response(ctx, p);
      std::vector<std::string> row{detail::cell(i), detail::cell(req.slab + 1),
                                   detail::cell(ctx.motive), detail::cell(p),
                                   detail::cell(x.quantity), detail::cell(x.infeasible),
                                   detail::cell(response_slope(ctx, p))};
      const bool defined = !x.infeasible && x.quantity > 0.0;
      row.push_back(defined ? detail::cell(hazard_rate(ctx, p)) : "");
      row.push_back(defined ? detail::cell(point_elasticity(ctx, p)) : "");
      for (double r : req.reference_prices) {
        const DemandValue ref = price_response(ctx, r);
        const bool ok = !ref.infeasible && ref.quantity > 0.0;
        row.push_back(ok ? detail::cell(willingness_to_pay(ctx, p, r)) : "");
      }
      t.add_row(std::move(row));
    }
  }
  return t;
}

// Per-slab expected-revenue breakdown for every consumer, and a per-consumer
// summary closed by a market row.
inline std::vector<CsvTable> revenue_tables(const Scenario& s) {
  const DomainSpec domain = s.domain();
  CsvTable slabs;
  slabs.name = "revenue_slabs";
  slabs.header = {"consumer", "slab", "price", "reach", "acceptance", "demand", "infeasible",
                  "contribution"};
  CsvTable summary;
  summary.name = "revenue_summary";
  summary.header = {"consumer", "reachable_slabs", "expected_revenue", "diagnostic"};
  double market = 0.0;
  for (std::size_t i = 0; i < s.consumers.size(); ++i) {
    const RevenueReport r = expected_revenue(build_plan(s.consumers[i], domain));
    for (const SlabContribution& c : r.per_slab) {
      slabs.add_row({detail::cell(i), detail::cell(c.slab), detail::cell(c.price),
                     detail::cell(c.reach), detail::cell(c.acceptance), detail::cell(c.demand),
                     detail::cell(c.infeasible), detail::cell(c.contribution)});
    }
    summary.add_row({detail::cell(i), detail::cell(r.per_slab.size()), detail::cell(r.total),
                     r.diagnostic});
    market += r.total;
  }
  summary.add_row({"market", "", detail::cell(market), ""});
  return {slabs, summary};
}

// Candidate grid described by the optimizer request for its consumer.
inline SlabGrid slab_grid(const Scenario& s) {
  const OptimizerRequest& req = detail::need(s.analysis.optimizer, "optimizer");
  const Consumer& c = s.consumers.at(req.consumer);
  SlabGrid grid;
  grid.max_slabs = req.max_slabs;
  grid.first_slab_prices = req.first_slab_prices;
  grid.discount_per_slab = req.discount_per_slab;
  grid.lambda = req.lambda;
  grid.attention_span = req.attention_span;
  grid.context = detail::commodity_context(s, c, 1, c.x1_min, c.x2_min);
  grid.slab_motives = c.mu;
  return grid;
}

inline OptimizationResult run_optimizer(const Scenario& s) {
  const std::vector<SlabPlan> plans = enumerate_plans(slab_grid(s));
  return optimize_slab_structure(plans);
}

// Best plan per slab count plus the overall winner.
inline CsvTable slab_study_table(const Scenario& s) {
  const OptimizationResult result = run_optimizer(s);
  CsvTable t;
  t.name = "slab_count_study";
  t.header = {"slab_count", "first_slab_price", "last_slab_price", "expected_revenue",
              "reachable_slabs", "best_overall"};
  for (const auto& [count, report] : result.best_by_slab_count) {
    t.add_row({detail::cell(count), detail::cell(report.plan.slabs.front().price),
               detail::cell(report.plan.slabs.back().price), detail::cell(report.total),
               detail::cell(report.per_slab.size()),
               detail::cell(count == result.best_plan.slabs.size())});
  }
  return t;
}

struct EquilibriumRow {
  int commodity = 1;
  std::size_t consumer = 0;
  double motive = 0.0;
  std::optional<Equilibrium> constrained;
  std::optional<Equilibrium> unconstrained;
  std::string error;
};

inline std::vector<SupplyLine> fit_supply_lines(const Scenario& s) {
  const EquilibriumRequest& req = detail::need(s.analysis.equilibrium, "equilibrium");
  std::vector<SupplyLine> lines;
  for (const SupplyRequest& sr : req.supply) lines.push_back(fit_supply_line(sr.pairs, sr.method));
  return lines;
}

inline std::vector<EquilibriumRow> solve_equilibria(const Scenario& s) {
  const EquilibriumRequest& req = detail::need(s.analysis.equilibrium, "equilibrium");
  const std::vector<SupplyLine> lines = fit_supply_lines(s);
  std::vector<EquilibriumRow> rows;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const int commodity = req.supply[l].commodity;
    for (std::size_t i = 0; i < s.consumers.size(); ++i) {
      const Consumer& c = s.consumers[i];
      const double own = commodity == 1 ? c.x1_min : c.x2_min;
      const double other = commodity == 1 ? c.x2_min : c.x1_min;
      const ResponseContext con = detail::commodity_context(s, c, commodity, own, other);
      const ResponseContext unc = detail::commodity_context(
          s, c, commodity, req.unconstrained_min[commodity - 1],
          req.unconstrained_min[2 - commodity]);
      EquilibriumRow row{commodity, i, con.motive, std::nullopt, std::nullopt, ""};
      try {
        row.constrained = solve_equilibrium(
            [&](double p) { return price_response(con, p); }, lines[l], req.q_lo, req.q_hi);
        row.unconstrained = solve_equilibrium(
            [&](double p) { return price_response(unc, p); }, lines[l], req.q_lo, req.q_hi);
      } catch (const Error& e) {
        row.error = std::string(to_string(e.category())) + ": " + e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::vector<CsvTable> equilibrium_tables(const Scenario& s) {
  const EquilibriumRequest& req = detail::need(s.analysis.equilibrium, "equilibrium");
  const std::vector<SupplyLine> lines = fit_supply_lines(s);
  CsvTable fit;
  fit.name = "supply_fit";
  fit.header = {"commodity", "method", "slope", "intercept", "pairs"};
  for (std::size_t l = 0; l < lines.size(); ++l) {
    fit.add_row({std::to_string(req.supply[l].commodity), std::string(to_string(lines[l].method)),
                 detail::cell(lines[l].slope), detail::cell(lines[l].intercept),
                 detail::cell(lines[l].source.size())});
  }

  CsvTable eq;
  eq.name = "equilibrium";
  eq.header = {"commodity", "consumer", "motive", "q_star", "p_star", "q_star_unconstrained",
               "p_star_unconstrained", "dominance_at_crossing", "constrained_price_higher",
               "error"};
  for (const EquilibriumRow& r : solve_equilibria(s)) {
    if (!r.constrained || !r.unconstrained) {
      eq.add_row({std::to_string(r.commodity), detail::cell(r.consumer), detail::cell(r.motive),
                  "", "", "", "", "", "", r.error});
      continue;
    }
    const double other_price = r.commodity == 1 ? s.offer2.slabs.front().unit_price
                                                : s.offer1.slabs.front().unit_price;
    // Constrained demand exceeds unconstrained exactly above this price.
    const bool dominance =
        r.motive < 1.0 && r.constrained->price > other_price * r.motive / (1.0 - r.motive);
    eq.add_row({std::to_string(r.commodity), detail::cell(r.consumer), detail::cell(r.motive),
                detail::cell(r.constrained->quantity), detail::cell(r.constrained->price),
                detail::cell(r.unconstrained->quantity), detail::cell(r.unconstrained->price),
                detail::cell(dominance),
                detail::cell(r.constrained->price > r.unconstrained->price), ""});
  }
  return {fit, eq};
}

struct MarketSimulation {
  double closed_form = 0.0;
  double mc_mean = 0.0;
  double standard_error = 0.0;  // of the market total
  std::vector<double> consumer_closed_form;
  std::vector<MonteCarloEstimate> consumer_estimates;

  bool within(double sigmas) const {
    return std::abs(mc_mean - closed_form) <=
           sigmas * standard_error + 1e-12 * std::abs(closed_form);
  }
};

// Each consumer is simulated on an independent stream derived from `seed`.
inline MarketSimulation simulate_market(const Scenario& s, std::optional<std::uint64_t> seed) {
  const SimulationRequest req = s.analysis.simulation.value_or(SimulationRequest{});
  const std::uint64_t base = seed.value_or(req.seed);
  const DomainSpec domain = s.domain();
  MarketSimulation out;
  double variance = 0.0;
  for (std::size_t i = 0; i < s.consumers.size(); ++i) {
    const SlabPlan plan = build_plan(s.consumers[i], domain);
    const RevenueReport closed = expected_revenue(plan);
    SimConfig cfg;
    cfg.trials = req.trials;
    cfg.seed = substream_seed(base, i);
    MonteCarloEstimate est = estimate_expected_revenue_mc(plan, cfg);
    out.closed_form += closed.total;
    out.mc_mean += est.mean;
    variance += est.standard_error * est.standard_error;
    out.consumer_closed_form.push_back(closed.total);
    out.consumer_estimates.push_back(std::move(est));
  }
  out.standard_error = std::sqrt(variance);
  return out;
}

inline CsvTable simulation_table(const Scenario& s, std::optional<std::uint64_t> seed) {
  const MarketSimulation sim = simulate_market(s, seed);
  CsvTable t;
  t.name = "simulation";
  t.header = {"consumer", "trials", "closed_form", "mc_mean", "standard_error", "z_score",
              "within_3se"};
  auto z = [](double mean, double closed, double se) {
    return se > 0.0 ? (mean - closed) / se : 0.0;
  };
  for (std::size_t i = 0; i < sim.consumer_estimates.size(); ++i) {
    const MonteCarloEstimate& e = sim.consumer_estimates[i];
    const double c = sim.consumer_closed_form[i];
    const bool ok = std::abs(e.mean - c) <= 3.0 * e.standard_error + 1e-12 * std::abs(c);
    t.add_row({detail::cell(i), std::to_string(e.trials), detail::cell(c), detail::cell(e.mean),
               detail::cell(e.standard_error), detail::cell(z(e.mean, c, e.standard_error)),
               detail::cell(ok)});
  }
  t.add_row({"market", "", detail::cell(sim.closed_form), detail::cell(sim.mc_mean),
             detail::cell(sim.standard_error),
             detail::cell(z(sim.mc_mean, sim.closed_form, sim.standard_error)),
             detail::cell(sim.within(3.0))});
  return t;
}

// Names of the scenarios shipped under scenarios/.
inline const std::vector<std::string>& bundled_scenarios() {
  static const std::vector<std::string> names{"grocery_convex", "grocery_mixed", "grocery_nonconvex",
                                              "slab_count_study", "fresho_beans"};
  return names;
}

inline Scenario load_bundled(const std::filesystem::path& dir, const std::string& name) {
  return parse_scenario((dir / (name + ".scn")).string());
}

// Revenue of the convex market's consumers on each of the three grocery domains
// and the slab example.
inline DomainRanking rank_bundled_domains(const std::filesystem::path& dir) {
  const Scenario market = load_bundled(dir, "grocery_convex");
  std::vector<DomainCase> cases;
  for (const char* name : {"grocery_convex", "grocery_mixed", "grocery_nonconvex", "fresho_beans"}) {
    cases.push_back({name, load_bundled(dir, name).domain()});
  }
  return compare_domains(cases, market.consumers);
}

inline CsvTable domain_ranking_table(const DomainRanking& ranking) {
  CsvTable t;
  t.name = "domain_ranking";
  t.header = {"rank", "domain", "kind", "market_expected_revenue"};
  for (std::size_t i = 0; i < ranking.ranked.size(); ++i) {
    const DomainRevenue& d = ranking.ranked[i];
    t.add_row({detail::cell(i + 1), d.name, std::string(to_string(d.kind)), detail::cell(d.total)});
  }
  return t;
}

struct ReproduceResult {
  std::vector<std::filesystem::path> written;
};

// Runs every analysis on the bundled scenarios and writes the CSV artifacts
// into `out_dir`. A seed overrides the scenarios' simulation seeds.
inline ReproduceResult reproduce(const std::filesystem::path& scenario_dir,
                                 const std::filesystem::path& out_dir,
                                 std::optional<std::uint64_t> seed, bool overwrite) {
  std::vector<CsvTable> tables;
  const Scenario convex = load_bundled(scenario_dir, "grocery_convex");
  for (CsvTable& t : demand_curve_tables(convex)) tables.push_back(std::move(t));
  tables.push_back(response_table(convex));
  for (CsvTable& t : equilibrium_tables(convex)) tables.push_back(std::move(t));

  tables.push_back(slab_study_table(load_bundled(scenario_dir, "slab_count_study")));
  tables.push_back(domain_ranking_table(rank_bundled_domains(scenario_dir)));

  CsvTable validation;
  validation.name = "mc_validation";
  validation.header = {"scenario", "consumers", "closed_form", "mc_mean", "standard_error",
                       "within_3se"};
  for (const std::string& name : bundled_scenarios()) {
    const Scenario s = load_bundled(scenario_dir, name);
    for (CsvTable& t : revenue_tables(s)) {
      t.name = name + "_" + t.name;
      tables.push_back(std::move(t));
    }
    const MarketSimulation sim = simulate_market(s, seed);
    validation.add_row({name, detail::cell(s.consumers.size()), detail::cell(sim.closed_form),
                        detail::cell(sim.mc_mean), detail::cell(sim.standard_error),
                        detail::cell(sim.within(3.0))});
  }
  tables.push_back(std::move(validation));

  ReproduceResult result;
  for (const CsvTable& t : tables) result.written.push_back(write_csv(out_dir, t, overwrite));
  return result;
}

}  // namespace slabprice
