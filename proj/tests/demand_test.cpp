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

#include "slabprice/demand.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace slabprice {
namespace {

Offer linear(double price, double min_qty = 200.0) { return Offer{"x", {{price, min_qty}}, "g"}; }

Offer stepped(std::vector<Slab> slabs) { return Offer{"y", std::move(slabs), "g"}; }

Consumer consumer(double mu, double phi, double budget, double x1_min, double x2_min) {
  Consumer c;
  c.budget = budget;
  c.mu = {mu};
  c.phi = {phi};
  c.x1_min = x1_min;
  c.x2_min = x2_min;
  c.x1_max = 1e9;
  c.x2_max = 1e9;
  return c;
}

TEST(ClassifyDomain, CountsNonLinearOffers) {
  const Offer one = linear(1.0);
  const Offer two = stepped({{1.0, 1.0}, {0.9, 2.0}});
  const Offer three = stepped({{1.0, 1.0}, {0.9, 2.0}, {0.8, 3.0}});
  EXPECT_EQ(classify_domain(one, one), DomainKind::convex);
  EXPECT_EQ(classify_domain(one, three), DomainKind::mixed);
  EXPECT_EQ(classify_domain(three, one), DomainKind::mixed);
  EXPECT_EQ(classify_domain(two, three), DomainKind::non_convex);
}

TEST(Offer, ValidatesSlabs) {
  EXPECT_THROW(validate(stepped({})), Error);
  EXPECT_THROW(validate(stepped({{1.0, 2.0}, {0.5, 2.0}})), Error);
  EXPECT_THROW(validate(stepped({{0.0, 2.0}})), Error);
  EXPECT_NO_THROW(validate(stepped({{1.0, 2.0}, {0.5, 3.0}})));
}

TEST(Consumer, ValidatesInvariants) {
  Consumer c = consumer(0.5, 0.5, 1000.0, 200.0, 200.0);
  EXPECT_NO_THROW(validate(c));
  c.lambda = {1.2};
  EXPECT_THROW(validate(c), Error);
  c = consumer(0.5, 0.5, 1000.0, 200.0, 200.0);
  c.x1_max = 100.0;
  EXPECT_THROW(validate(c), Error);
  c = consumer(0.5, 0.5, 0.0, 200.0, 200.0);
  EXPECT_THROW(validate(c), Error);
}

TEST(Consumer, AffordabilityAtFirstSlabPrices) {
  const Consumer c = consumer(0.5, 0.5, 1000.0, 200.0, 200.0);
  EXPECT_TRUE(is_affordable(c, linear(0.175), linear(0.19)));
  EXPECT_FALSE(is_affordable(c, linear(35.0), linear(38.49)));
}

TEST(DemandConvex, MotiveExtremes) {
  const PairDemand zero = demand_convex_pair(consumer(0.0, 0.0, 1000.0, 200.0, 200.0), 0.175, 0.19);
  EXPECT_EQ(zero.x1, 200.0);
  EXPECT_EQ(zero.x2, 200.0);
  const PairDemand full = demand_convex_pair(consumer(1.0, 0.0, 1000.0, 200.0, 0.0), 0.175, 0.19);
  EXPECT_DOUBLE_EQ(full.x1, 1000.0 / 0.175);
}

// Grid search along x1 for the point whose linear degree of preference
// (x1 - x1min) / (x1max - x1min) equals the motive, with x1max the largest x1
// affordable once x2 sits at its minimum.
double budget_line_search(double mu, double m, double p1, double p2, double x1_min,
                          double x2_min, double step) {
  const double x1_max = (m - p2 * x2_min) / p1;
  double best = x1_min, best_gap = 1e300;
  for (double x = x1_min; x <= x1_max; x += step) {
    const double gap = std::abs((x - x1_min) / (x1_max - x1_min) - mu);
    if (gap < best_gap) {
      best_gap = gap;
      best = x;
    }
  }
  return best;
}

TEST(DemandConvex, PerGramParameters) {
  const PairDemand d = demand_convex_pair(consumer(0.5, 0.5, 1000.0, 200.0, 200.0), 0.175, 0.19);
  EXPECT_NEAR(d.x1, 2848.5714285714286, 1e-9);
  EXPECT_FALSE(d.infeasible);
  const double searched = budget_line_search(0.5, 1000.0, 0.175, 0.19, 200.0, 200.0, 1e-3);
  EXPECT_NEAR(d.x1, searched, 1e-3);
}

TEST(DemandConvex, NegativeRawDemandIsClampedAndFlagged) {
  const PairDemand d = demand_convex_pair(consumer(0.3, 0.3, 1000.0, 2.0, 200.0), 35.0, 38.49);
  EXPECT_NEAR(d.raw_x1, -56.011428571428571, 1e-9);
  EXPECT_EQ(d.x1, 0.0);
  EXPECT_TRUE(d.infeasible);
}

TEST(DemandConvex, RejectsNonPositivePrices) {
  const Consumer c = consumer(0.5, 0.5, 1000.0, 200.0, 200.0);
  EXPECT_THROW(demand_convex_pair(c, 0.0, 0.19), Error);
  EXPECT_THROW(demand_convex_pair(c, 0.175, -1.0), Error);
}

TEST(DemandConvex, StrictlyDecreasingInOwnPrice) {
  for (double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const Consumer c = consumer(mu, mu, 1000.0, 200.0, 200.0);
    double prev = demand_convex_pair(c, 0.01, 0.19).raw_x1;
    for (double p = 0.02; p < 60.0; p *= 1.1) {
      const double x = demand_convex_pair(c, p, 0.19).raw_x1;
      ASSERT_LT(x, prev) << "mu=" << mu << " p=" << p;
      prev = x;
    }
  }
}

TEST(DemandConvex, MinimumOrderDominanceThreshold) {
  // Minimums 200/200 against 1/1: the constrained curve is higher exactly when
  // p > 0.19 mu / (1 - mu).
  for (int i = 1; i <= 9; ++i) {
    const double mu = i / 10.0;
    const Consumer constrained = consumer(mu, mu, 1000.0, 200.0, 200.0);
    const Consumer loose = consumer(mu, mu, 1000.0, 1.0, 1.0);
    const double threshold = 0.19 * mu / (1.0 - mu);
    for (double p = 1.0; p <= 50.0; p += 0.25) {
      if (std::abs(p - threshold) < 1e-9) continue;
      const double a = demand_convex_pair(constrained, p, 0.19).raw_x1;
      const double b = demand_convex_pair(loose, p, 0.19).raw_x1;
      ASSERT_EQ(a > b, p > threshold) << "mu=" << mu << " p=" << p;
    }
  }
}

TEST(DemandConvex, BudgetExhaustedAtFullMotive) {
  for (double p1 : {0.1, 0.175, 2.0, 35.0}) {
    const Consumer c = consumer(1.0, 1.0, 1000.0, 2.0, 5.0);
    const PairDemand d = demand_convex_pair(c, p1, 0.19);
    EXPECT_NEAR((p1 * d.x1 + 0.19 * c.x2_min) / c.budget, 1.0, 1e-9);
    EXPECT_NEAR((0.19 * d.x2 + p1 * c.x1_min) / c.budget, 1.0, 1e-9);
  }
}

TEST(DemandMixed, SecondConsiderationSet) {
  const Offer x1 = linear(0.175);
  const Offer x2 = stepped({{0.2, 100.0}, {0.22, 250.0}});
  const MixedDemand d = demand_mixed_pair(consumer(0.5, 0.5, 1000.0, 200.0, 100.0), x1, x2);
  EXPECT_NEAR(d.x1, 2900.0, 1e-9);
  EXPECT_EQ(d.chosen_slab, 0u);
  EXPECT_EQ(demand_mixed_pair(consumer(0.0, 0.0, 1000.0, 200.0, 100.0), x1, x2).x1, 200.0);
}

TEST(DemandMixed, BudgetExhaustedAtFullMotive) {
  const Offer x1 = linear(0.175);
  const Offer x2 = stepped({{0.2, 100.0}, {0.22, 250.0}});
  const Consumer c = consumer(1.0, 1.0, 1000.0, 200.0, 100.0);
  const MixedDemand d = demand_mixed_pair(c, x1, x2);
  EXPECT_NEAR((0.175 * d.x1 + 0.2 * c.x2_min) / c.budget, 1.0, 1e-9);
  EXPECT_NEAR((0.2 * d.x2 + 0.175 * c.x1_min) / c.budget, 1.0, 1e-9);
}

TEST(DemandMixed, CheapestAffordableSlabWins) {
  const Offer x1 = linear(0.175);
  const Offer x2 = stepped({{0.2, 100.0}, {0.15, 250.0}, {0.15, 400.0}});
  EXPECT_EQ(demand_mixed_pair(consumer(0.5, 0.5, 1000.0, 200.0, 100.0), x1, x2).chosen_slab, 1u);
  // p1 x1min alone exceeds the budget.
  EXPECT_THROW(
      {
        try {
          demand_mixed_pair(consumer(0.5, 0.5, 10.0, 200.0, 100.0), x1, x2);
        } catch (const Error& e) {
          EXPECT_EQ(e.category(), ErrorCategory::infeasible);
          throw;
        }
      },
      Error);
  EXPECT_THROW(demand_mixed_pair(consumer(0.5, 0.5, 1000.0, 1.0, 1.0), x2, x1), Error);
}

TEST(DemandNonConvex, StageOneSimplifiedForm) {
  const Offer x1 = stepped({{0.054, 250.0}, {0.0535, 1000.0}});
  const Offer x2 = stepped({{0.2, 100.0}, {0.19, 200.0}});
  const Consumer c = consumer(0.5, 0.5, 1000.0, 250.0, 200.0);
  const NonConvexDemand d = demand_nonconvex_pair(c, x1, x2);
  EXPECT_NEAR(d.x1_stage1, 9115.6542056074766, 1e-8);
  EXPECT_NEAR(nonconvex_stage1_x1_unsimplified(c, x1, x2), d.x1_stage1, 1e-9 * d.x1_stage1);
  EXPECT_EQ(demand_nonconvex_pair(consumer(0.0, 0.0, 1000.0, 250.0, 200.0), x1, x2).x1_stage1,
            250.0);
}

TEST(DemandNonConvex, RefinedStageSpendsTheRemainder) {
  const Offer x1 = stepped({{0.054, 250.0}, {0.0535, 1000.0}});
  const Offer x2 = stepped({{0.2, 100.0}, {0.19, 200.0}});
  // phi = 0 pins x2 at its minimum of 100.
  const NonConvexDemand d = demand_nonconvex_pair(consumer(0.5, 0.0, 1000.0, 250.0, 100.0), x1, x2);
  EXPECT_EQ(d.x2_stage1, 100.0);
  EXPECT_NEAR(d.x1_refined, 18148.148148148148, 1e-8);
  EXPECT_NEAR(d.x2_refined, (1000.0 - 0.0535 * d.x1_stage1) / 0.19, 1e-9);
}

TEST(DemandNonConvex, TwoWayComplementarity) {
  const Offer x1 = stepped({{0.054, 250.0}, {0.0535, 1000.0}});
  const Offer x2 = stepped({{0.2, 100.0}, {0.19, 200.0}});
  double prev_refined = 1e300, prev_stage1 = 1e300;
  for (double phi = 0.0; phi <= 1.0; phi += 0.1) {
    const double r = demand_nonconvex_pair(consumer(0.5, phi, 1000.0, 250.0, 200.0), x1, x2).x1_refined;
    EXPECT_LT(r, prev_refined);
    prev_refined = r;
  }
  for (double x2_min = 50.0; x2_min <= 1000.0; x2_min += 50.0) {
    const double s = demand_nonconvex_pair(consumer(0.5, 0.5, 1000.0, 250.0, x2_min), x1, x2).x1_stage1;
    EXPECT_LT(s, prev_stage1);
    prev_stage1 = s;
  }
  EXPECT_THROW(demand_nonconvex_pair(consumer(0.5, 0.5, 1000.0, 1.0, 1.0), linear(1.0), x2), Error);
}

DomainSpec convex_domain() { return make_domain(linear(0.175), linear(0.19)); }

TEST(AggregateDemand, SingletonMatchesIndividual) {
  const Consumer c = consumer(0.4, 0.7, 1000.0, 200.0, 100.0);
  const std::vector<Consumer> market{c};

  const AggregateDemand convex = aggregate_demand(market, convex_domain());
  const PairDemand pair = demand_convex_pair(c, 0.175, 0.19);
  EXPECT_DOUBLE_EQ(convex.x1, pair.x1);
  EXPECT_DOUBLE_EQ(convex.x2, pair.x2);

  const Offer x2 = stepped({{0.2, 100.0}, {0.22, 250.0}});
  const AggregateDemand mixed = aggregate_demand(market, make_domain(linear(0.175), x2));
  const MixedDemand m = demand_mixed_pair(c, linear(0.175), x2);
  EXPECT_NEAR(mixed.x1, m.x1, 1e-9 * m.x1);
  EXPECT_NEAR(mixed.x2, m.x2, 1e-9 * m.x2);

  const Offer x1s = stepped({{0.054, 250.0}, {0.0535, 1000.0}});
  const AggregateDemand nc = aggregate_demand(market, make_domain(x1s, x2));
  const NonConvexDemand n = demand_nonconvex_pair(c, x1s, x2);
  EXPECT_DOUBLE_EQ(nc.x1, n.x1_stage1);
  EXPECT_DOUBLE_EQ(nc.x2, n.x2_stage1);
}

TEST(AggregateDemand, MaxMotiveWithPooledBudgets) {
  const std::vector<Consumer> market{consumer(0.3, 0.3, 500.0, 200.0, 200.0),
                                     consumer(0.6, 0.6, 500.0, 200.0, 200.0)};
  const AggregateDemand agg = aggregate_demand(market, convex_domain());
  const PairDemand ref = demand_convex_pair(consumer(0.6, 0.6, 1000.0, 400.0, 400.0), 0.175, 0.19);
  EXPECT_DOUBLE_EQ(agg.x1, ref.x1);
  EXPECT_DOUBLE_EQ(agg.x2, ref.x2);
}

TEST(AggregateDemand, NeutralConsumerLeavesDemandUnchanged) {
  std::vector<Consumer> market{consumer(0.3, 0.5, 500.0, 200.0, 150.0),
                               consumer(0.6, 0.2, 700.0, 100.0, 200.0)};
  const Offer x2 = stepped({{0.2, 100.0}, {0.22, 250.0}});
  const Offer x1s = stepped({{0.054, 250.0}, {0.0535, 1000.0}});
  const std::vector<DomainSpec> domains{convex_domain(), make_domain(linear(0.175), x2),
                                        make_domain(x1s, x2)};
  for (const DomainSpec& d : domains) {
    const AggregateDemand before = aggregate_demand(market, d);
    std::vector<Consumer> grown = market;
    grown.push_back(consumer(0.1, 0.1, 0.0, 0.0, 0.0));
    const AggregateDemand after = aggregate_demand(grown, d);
    EXPECT_DOUBLE_EQ(before.x1, after.x1) << to_string(d.kind);
    EXPECT_DOUBLE_EQ(before.x2, after.x2) << to_string(d.kind);
  }
}

TEST(AggregateDemand, ClonesReduceToSummedIndividual) {
  const Consumer unit = consumer(0.45, 0.65, 400.0, 120.0, 80.0);
  const Offer x2 = stepped({{0.2, 50.0}, {0.22, 250.0}});
  const Offer x1s = stepped({{0.054, 100.0}, {0.0535, 1000.0}});
  for (int n : {1, 2, 5}) {
    const std::vector<Consumer> market(n, unit);
    const Consumer pooled = consumer(0.45, 0.65, 400.0 * n, 120.0 * n, 80.0 * n);

    const AggregateDemand c = aggregate_demand(market, convex_domain());
    const PairDemand ci = demand_convex_pair(pooled, 0.175, 0.19);
    EXPECT_NEAR(c.x1, ci.x1, 1e-9 * ci.x1);
    EXPECT_NEAR(c.x2, ci.x2, 1e-9 * ci.x2);

    const AggregateDemand m = aggregate_demand(market, make_domain(linear(0.175), x2));
    const MixedDemand mi = demand_mixed_pair(pooled, linear(0.175), x2);
    EXPECT_NEAR(m.x1, mi.x1, 1e-9 * mi.x1);
    EXPECT_NEAR(m.x2, mi.x2, 1e-9 * mi.x2);

    const AggregateDemand nc = aggregate_demand(market, make_domain(x1s, x2));
    const NonConvexDemand ni = demand_nonconvex_pair(pooled, x1s, x2);
    EXPECT_NEAR(nc.x1, ni.x1_stage1, 1e-9 * ni.x1_stage1);
    EXPECT_NEAR(nc.x2, ni.x2_stage1, 1e-9 * ni.x2_stage1);
  }
}

TEST(AggregateDemand, EmptyMarketRejected) {
  EXPECT_THROW(aggregate_demand(std::vector<Consumer>{}, convex_domain()), Error);
}

}  // namespace
}  // namespace slabprice
