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

// Expected revenue of a slab offer seen by a consumer with a finite attention
// span, plus exhaustive slab-structure search and domain comparison.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slabprice/demand.hpp"
#include "slabprice/error.hpp"
#include "slabprice/price_response.hpp"

namespace slabprice {

struct PlanSlab {
  double price = 0.0;
  ResponseContext context;

  bool operator==(const PlanSlab&) const = default;
};

struct SlabPlan {
  std::vector<PlanSlab> slabs;
  std::vector<double> lambda;  // one acceptance probability per slab
  std::size_t attention_span = 1;

  std::size_t reachable() const { return std::min(attention_span, slabs.size()); }

  bool operator==(const SlabPlan&) const = default;
};

inline void validate(const SlabPlan& plan) {
  detail::require(!plan.slabs.empty(), "plan: needs at least one slab");
  detail::require(plan.lambda.size() == plan.slabs.size(),
                  "plan: lambda must have one entry per slab");
  detail::require_unit_interval(plan.lambda, "lambda");
  detail::require(plan.attention_span >= 1, "plan: attention_span must be at least 1");
  for (const PlanSlab& s : plan.slabs) detail::require_price(s.price, "plan");
}

// Probability of reaching slab k (1-based) without having accepted earlier.
inline double reach_probability(std::span<const double> lambda, std::size_t k) {
  detail::require(k >= 1 && k <= lambda.size(), "purchase_probability: slab index out of range");
  double reach = 1.0;
  for (std::size_t j = 0; j + 1 < k; ++j) reach *= 1.0 - lambda[j];
  return reach;
}

// prod_{j<k} (1 - lambda_j) * lambda_k, k 1-based.
inline double purchase_probability(std::span<const double> lambda, std::size_t k) {
  return reach_probability(lambda, k) * lambda[k - 1];
}

struct SlabContribution {
  std::size_t slab = 0;  // 1-based
  double reach = 0.0;
  double acceptance = 0.0;
  double demand = 0.0;
  double price = 0.0;
  double contribution = 0.0;
  bool infeasible = false;
};

struct RevenueReport {
  std::vector<SlabContribution> per_slab;
  double total = 0.0;
  SlabPlan plan;
  std::string diagnostic;
};

// Demand evaluator backed by each slab's response context.
struct ResponseDemand {
  DemandValue operator()(std::size_t /*slab*/, const PlanSlab& s) const {
    return price_response(s.context, s.price);
  }
};

// Demand evaluator returning fixed per-slab quantities.
struct FixedDemand {
  std::vector<double> quantities;

  DemandValue operator()(std::size_t slab, const PlanSlab&) const {
    return detail::clamp_demand(quantities.at(slab));
  }
};

// Sum over k <= min(y, N) of reach_k * lambda_k * x(p_k) * p_k. `demand` is
// called as demand(slab_index_0_based, plan_slab) and returns a DemandValue.
template <class DemandFn>
RevenueReport expected_revenue(const SlabPlan& plan, DemandFn&& demand) {
  validate(plan);
  RevenueReport report;
  report.plan = plan;
  std::size_t infeasible = 0;
  double reach = 1.0;
  for (std::size_t k = 0; k < plan.reachable(); ++k) {
    const PlanSlab& slab = plan.slabs[k];
    const DemandValue x = demand(k, slab);
    SlabContribution row;
    row.slab = k + 1;
    row.reach = reach;
    row.acceptance = plan.lambda[k];
    row.demand = x.quantity;
    row.price = slab.price;
    row.infeasible = x.infeasible;
    row.contribution = row.reach * row.acceptance * row.demand * row.price;
    report.total += row.contribution;
    report.per_slab.push_back(row);
    if (x.infeasible) ++infeasible;
    reach *= 1.0 - plan.lambda[k];
  }
  if (infeasible == report.per_slab.size()) {
    report.diagnostic = "demand infeasible at every reachable slab";
  } else if (infeasible > 0) {
    report.diagnostic = std::to_string(infeasible) + " reachable slab(s) infeasible";
  }
  return report;
}

inline RevenueReport expected_revenue(const SlabPlan& plan) {
  return expected_revenue(plan, ResponseDemand{});
}

// Candidate family for the slab-structure search: every slab count in
// [1, max_slabs] crossed with every first-slab price. Slab k sells at
// first_price * (1 - discount_per_slab)^(k-1).
struct SlabGrid {
  std::size_t max_slabs = 1;
  std::vector<double> first_slab_prices;
  double discount_per_slab = 0.05;
  double lambda = 0.5;
  std::size_t attention_span = 1;
  ResponseContext context;          // motive replaced per slab below
  std::vector<double> slab_motives;  // empty: use context.motive everywhere
};

inline std::vector<SlabPlan> enumerate_plans(const SlabGrid& grid) {
  detail::require(grid.max_slabs >= 1, "slab grid: max_slabs must be at least 1");
  detail::require(!grid.first_slab_prices.empty(), "slab grid: empty price grid");
  detail::require(grid.discount_per_slab > 0.0 && grid.discount_per_slab < 1.0,
                  "slab grid: discount must lie in (0,1)");
  std::vector<SlabPlan> plans;
  for (std::size_t count = 1; count <= grid.max_slabs; ++count) {
    for (double first : grid.first_slab_prices) {
      SlabPlan plan;
      plan.attention_span = grid.attention_span;
      double price = first;
      for (std::size_t k = 0; k < count; ++k) {
        PlanSlab slab{price, grid.context};
        if (!grid.slab_motives.empty()) slab.context.motive = motive_at(grid.slab_motives, k);
        plan.slabs.push_back(slab);
        plan.lambda.push_back(grid.lambda);
        price *= 1.0 - grid.discount_per_slab;
      }
      plans.push_back(std::move(plan));
    }
  }
  return plans;
}

struct OptimizationResult {
  SlabPlan best_plan;
  RevenueReport best;
  std::map<std::size_t, RevenueReport> best_by_slab_count;
  std::size_t evaluated = 0;
};

namespace detail {

// Strictly better revenue wins; ties go to fewer slabs, then a lower
// first-slab price.
inline bool preferred(const RevenueReport& a, const RevenueReport& b) {
  if (a.total != b.total) return a.total > b.total;
  if (a.plan.slabs.size() != b.plan.slabs.size()) return a.plan.slabs.size() < b.plan.slabs.size();
  return a.plan.slabs.front().price < b.plan.slabs.front().price;
}

}  // namespace detail

template <class DemandFn>
OptimizationResult optimize_slab_structure(std::span<const SlabPlan> candidates,
                                           DemandFn&& demand) {
  detail::require(!candidates.empty(), "optimize_slab_structure: empty candidate set");
  OptimizationResult result;
  bool have_best = false;
  for (const SlabPlan& plan : candidates) {
    for (std::size_t k = 1; k < plan.slabs.size(); ++k) {
      detail::require(plan.slabs[k].price < plan.slabs[k - 1].price,
                      "optimize_slab_structure: slab prices must strictly decrease");
    }
    RevenueReport report = expected_revenue(plan, demand);
    ++result.evaluated;
    auto [it, inserted] = result.best_by_slab_count.try_emplace(plan.slabs.size(), report);
    if (!inserted && detail::preferred(report, it->second)) it->second = report;
    if (!have_best || detail::preferred(report, result.best)) {
      result.best = std::move(report);
      have_best = true;
    }
  }
  result.best_plan = result.best.plan;
  return result;
}

inline OptimizationResult optimize_slab_structure(std::span<const SlabPlan> candidates) {
  return optimize_slab_structure(candidates, ResponseDemand{});
}

// Plan seen by one consumer when commodity 1 is sold on `domain`. Slab k of
// commodity 1 pairs with slab k of commodity 2 (the last slab of a shorter
// offer repeats); minimum quantities are the larger of the consumer's
// requirement and the platform's minimum order.
inline SlabPlan build_plan(const Consumer& c, const DomainSpec& domain) {
  const auto& own = domain.offer1.slabs;
  const auto& other = domain.offer2.slabs;
  SlabPlan plan;
  plan.attention_span = c.attention_span;
  for (std::size_t k = 0; k < own.size(); ++k) {
    const Slab& partner = other[std::min(k, other.size() - 1)];
    ResponseContext ctx;
    ctx.motive = motive_at(c.mu, k);
    ctx.budget = c.budget;
    ctx.other_price = partner.unit_price;
    ctx.own_min = std::max(c.x1_min, own[k].min_qty);
    ctx.other_min = std::max(c.x2_min, partner.min_qty);
    plan.slabs.push_back({own[k].unit_price, ctx});
    plan.lambda.push_back(motive_at(c.lambda, k));
  }
  return plan;
}

struct DomainCase {
  std::string name;
  DomainSpec domain;
};

struct DomainRevenue {
  std::string name;
  DomainKind kind = DomainKind::convex;
  double total = 0.0;
  std::vector<RevenueReport> per_consumer;
};

struct DomainRanking {
  std::vector<DomainRevenue> ranked;  // descending total, stable on ties
};

// Market revenue of commodity 1 on each domain: the sum of every consumer's
// expected revenue.
inline DomainRanking compare_domains(std::span<const DomainCase> domains,
                                     std::span<const Consumer> market) {
  detail::require(domains.size() >= 2, "compare_domains: need at least two domains");
  detail::require(!market.empty(), "compare_domains: empty market");
  DomainRanking ranking;
  for (const DomainCase& d : domains) {
    validate(d.domain);
    DomainRevenue entry{d.name, d.domain.kind, 0.0, {}};
    for (const Consumer& c : market) {
      RevenueReport r = expected_revenue(build_plan(c, d.domain));
      entry.total += r.total;
      entry.per_consumer.push_back(std::move(r));
    }
    ranking.ranked.push_back(std::move(entry));
  }
  std::stable_sort(ranking.ranked.begin(), ranking.ranked.end(),
                   [](const DomainRevenue& a, const DomainRevenue& b) { return a.total > b.total; });
  return ranking;
}

}  // namespace slabprice
