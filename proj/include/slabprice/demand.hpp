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

// Individual and aggregate two-commodity demand under convex, mixed and
// non-convex slab domains.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slabprice/error.hpp"

namespace slabprice {

// One rung of a price schedule: the unit price paid once at least `min_qty`
// base units are ordered.
struct Slab {
  double unit_price = 0.0;
  double min_qty = 0.0;

  bool operator==(const Slab&) const = default;
};

struct Offer {
  std::string commodity_id;
  std::vector<Slab> slabs;  // ascending min_qty
  std::string unit_label = "g";

  bool is_linear_price() const { return slabs.size() == 1; }

  bool operator==(const Offer&) const = default;
};

inline void validate(const Offer& offer) {
  const std::string who = "offer '" + offer.commodity_id + "'";
  detail::require(!offer.slabs.empty(), who + ": needs at least one slab");
  for (std::size_t k = 0; k < offer.slabs.size(); ++k) {
    const Slab& s = offer.slabs[k];
    detail::require(s.unit_price > 0.0 && std::isfinite(s.unit_price),
                    who + ": unit_price must be positive");
    detail::require(s.min_qty > 0.0 && std::isfinite(s.min_qty), who + ": min_qty must be positive");
    if (k > 0) {
      detail::require(s.min_qty > offer.slabs[k - 1].min_qty,
                      who + ": slab min_qty must be strictly increasing");
    }
  }
}

// Per-slab vectors (`mu`, `phi`, `lambda`) are indexed by slab; a vector
// shorter than the offer repeats its last entry for the remaining slabs.
struct Consumer {
  double budget = 0.0;
  std::vector<double> mu{0.0};   // motive towards commodity 1
  std::vector<double> phi{0.0};  // motive towards commodity 2
  double x1_min = 0.0;
  double x2_min = 0.0;
  double x1_max = 0.0;
  double x2_max = 0.0;
  std::size_t attention_span = 1;
  std::vector<double> lambda{1.0};  // per-slab acceptance probability

  bool operator==(const Consumer&) const = default;
};

inline double motive_at(std::span<const double> per_slab, std::size_t slab) {
  detail::require(!per_slab.empty(), "per-slab vector is empty");
  return per_slab[std::min(slab, per_slab.size() - 1)];
}

namespace detail {

inline void require_unit_interval(std::span<const double> values, std::string_view name) {
  require(!values.empty(), std::string(name) + " must have at least one entry");
  for (double v : values) {
    require(v >= 0.0 && v <= 1.0, std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace detail

inline void validate(const Consumer& c) {
  detail::require(c.budget > 0.0 && std::isfinite(c.budget), "consumer: budget must be positive");
  detail::require_unit_interval(c.mu, "mu");
  detail::require_unit_interval(c.phi, "phi");
  detail::require_unit_interval(c.lambda, "lambda");
  detail::require(c.x1_min >= 0.0 && c.x2_min >= 0.0, "consumer: minimums must be non-negative");
  detail::require(c.x1_min < c.x1_max, "consumer: x1_min must be below x1_max");
  detail::require(c.x2_min < c.x2_max, "consumer: x2_min must be below x2_max");
  detail::require(c.attention_span >= 1, "consumer: attention_span must be at least 1");
}

// Whether the consumer can cover both minimum requirements at first-slab
// prices.
inline bool is_affordable(const Consumer& c, const Offer& offer1, const Offer& offer2) {
  return offer1.slabs.front().unit_price * c.x1_min +
             offer2.slabs.front().unit_price * c.x2_min <=
         c.budget;
}

enum class DomainKind { convex, mixed, non_convex };

inline std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::convex: return "convex";
    case DomainKind::mixed: return "mixed";
    case DomainKind::non_convex: return "non_convex";
  }
  return "unknown";
}

inline DomainKind classify_domain(const Offer& offer1, const Offer& offer2) {
  const int nonlinear = (offer1.is_linear_price() ? 0 : 1) + (offer2.is_linear_price() ? 0 : 1);
  if (nonlinear == 0) return DomainKind::convex;
  if (nonlinear == 1) return DomainKind::mixed;
  return DomainKind::non_convex;
}

struct DomainSpec {
  Offer offer1;
  Offer offer2;
  DomainKind kind = DomainKind::convex;

  bool operator==(const DomainSpec&) const = default;
};

inline DomainSpec make_domain(Offer offer1, Offer offer2) {
  validate(offer1);
  validate(offer2);
  const DomainKind kind = classify_domain(offer1, offer2);
  return DomainSpec{std::move(offer1), std::move(offer2), kind};
}

inline void validate(const DomainSpec& d) {
  validate(d.offer1);
  validate(d.offer2);
  detail::require(d.kind == classify_domain(d.offer1, d.offer2),
                  "domain: classification does not match the offers");
}

// A demand quantity after clamping at zero. `infeasible` is set when the
// unclamped value was negative.
struct DemandValue {
  double quantity = 0.0;
  bool infeasible = false;
};

namespace detail {

// (1 - motive) own_min + motive (budget - other_price other_min) / own_price
inline double motive_demand(double motive, double budget, double own_price, double other_price,
                            double own_min, double other_min) {
  return (1.0 - motive) * own_min + motive * (budget / own_price) -
         motive * (other_price / own_price) * other_min;
}

inline DemandValue clamp_demand(double raw) {
  if (raw < 0.0) return {0.0, true};
  return {raw, false};
}

inline void require_price(double p, std::string_view what) {
  require(p > 0.0 && std::isfinite(p), std::string(what) + ": price must be positive");
}

}  // namespace detail

struct PairDemand {
  double x1 = 0.0;
  double x2 = 0.0;
  bool infeasible = false;  // either raw value was negative and got clamped
  double raw_x1 = 0.0;
  double raw_x2 = 0.0;
};

// Both commodities linearly priced. Uses the first-slab motives.
inline PairDemand demand_convex_pair(const Consumer& c, double p1, double p2) {
  detail::require_price(p1, "demand_convex_pair");
  detail::require_price(p2, "demand_convex_pair");
  const double mu = motive_at(c.mu, 0);
  const double phi = motive_at(c.phi, 0);
  PairDemand out;
  out.raw_x1 = detail::motive_demand(mu, c.budget, p1, p2, c.x1_min, c.x2_min);
  out.raw_x2 = detail::motive_demand(phi, c.budget, p2, p1, c.x2_min, c.x1_min);
  const DemandValue v1 = detail::clamp_demand(out.raw_x1);
  const DemandValue v2 = detail::clamp_demand(out.raw_x2);
  out.x1 = v1.quantity;
  out.x2 = v2.quantity;
  out.infeasible = v1.infeasible || v2.infeasible;
  return out;
}

// Cheapest affordable slab of `offer2` given a linear price `p1`: the lowest
// unit price wins, ties go to the smaller min_qty. Returns offer2.slabs.size()
// when nothing is affordable.
inline std::size_t select_affordable_slab(double budget, double p1, double x1_min,
                                          const Offer& offer2, double x2_min) {
  std::size_t best = offer2.slabs.size();
  for (std::size_t k = 0; k < offer2.slabs.size(); ++k) {
    const double p2 = offer2.slabs[k].unit_price;
    if (p1 * x1_min + p2 * x2_min > budget) continue;
    if (best == offer2.slabs.size() || p2 < offer2.slabs[best].unit_price) best = k;
  }
  return best;
}

struct MixedDemand {
  double x1 = 0.0;
  double x2 = 0.0;
  std::size_t chosen_slab = 0;  // index into offer2.slabs
};

// Linear price for commodity 1, slab schedule for commodity 2. The demand sits
// on the chosen slab's budget line:
//   x1 = mu/p1 [(m - p2 x2min) - p1 x1min] + x1min
//   x2 = phi/p2 [(m - p1 x1min) - p2 x2min] + x2min
inline MixedDemand demand_mixed_pair(const Consumer& c, const Offer& offer1, const Offer& offer2) {
  validate(offer1);
  validate(offer2);
  detail::require(offer1.is_linear_price(), "demand_mixed_pair: offer1 must have a single slab");
  const double p1 = offer1.slabs.front().unit_price;
  const std::size_t k = select_affordable_slab(c.budget, p1, c.x1_min, offer2, c.x2_min);
  if (k == offer2.slabs.size()) {
    detail::fail(ErrorCategory::infeasible,
                 "demand_mixed_pair: no slab of '" + offer2.commodity_id + "' is affordable");
  }
  const double p2 = offer2.slabs[k].unit_price;
  const double mu = motive_at(c.mu, 0);
  const double phi = motive_at(c.phi, k);
  MixedDemand out;
  out.chosen_slab = k;
  out.x1 = (mu / p1) * ((c.budget - p2 * c.x2_min) - p1 * c.x1_min) + c.x1_min;
  out.x2 = (phi / p2) * ((c.budget - p1 * c.x1_min) - p2 * c.x2_min) + c.x2_min;
  return out;
}

struct NonConvexDemand {
  double x1_stage1 = 0.0;
  double x2_stage1 = 0.0;
  double x1_refined = 0.0;
  double x2_refined = 0.0;
};

// Both commodities slab-priced; uses the first two slabs of each offer.
//
// Stage 1 in its published form carries a composite factor P that multiplies
// and divides every term:
//   x1 = mu/P [P/p1_2 (m - p2_2 x2min) - P x1min] + x1min
// which reduces to mu (m - p2_2 x2min)/p1_2 - mu x1min + x1min for any P != 0.
// Stage 2 spends what is left after the other commodity's stage-1 quantity:
//   x1* = (m - p2_1 x2) / p1_1,   x2* = (m - p1_2 x1) / p2_2
inline NonConvexDemand demand_nonconvex_pair(const Consumer& c, const Offer& offer1,
                                             const Offer& offer2) {
  validate(offer1);
  validate(offer2);
  detail::require(offer1.slabs.size() >= 2 && offer2.slabs.size() >= 2,
                  "demand_nonconvex_pair: both offers need at least two slabs");
  const double p1_1 = offer1.slabs[0].unit_price;
  const double p1_2 = offer1.slabs[1].unit_price;
  const double p2_1 = offer2.slabs[0].unit_price;
  const double p2_2 = offer2.slabs[1].unit_price;
  // The x1 equation is written against slab-2 prices, the x2 equation against
  // slab-1 prices; motives follow the same slab.
  const double mu = motive_at(c.mu, 1);
  const double phi = motive_at(c.phi, 0);
  NonConvexDemand out;
  out.x1_stage1 = mu * (c.budget - p2_2 * c.x2_min) / p1_2 - mu * c.x1_min + c.x1_min;
  out.x2_stage1 = phi * (c.budget - p1_1 * c.x1_min) / p2_1 - phi * c.x2_min + c.x2_min;
  out.x1_refined = (c.budget - p2_1 * out.x2_stage1) / p1_1;
  out.x2_refined = (c.budget - p1_2 * out.x1_stage1) / p2_2;
  return out;
}

// Stage-1 x1 evaluated without cancelling the composite factor, with
// P = m - (p1_1 x1min) p1_2. Only meaningful as a cross-check of the
// simplified form.
inline double nonconvex_stage1_x1_unsimplified(const Consumer& c, const Offer& offer1,
                                               const Offer& offer2) {
  const double p1_1 = offer1.slabs.at(0).unit_price;
  const double p1_2 = offer1.slabs.at(1).unit_price;
  const double p2_2 = offer2.slabs.at(1).unit_price;
  const double mu = motive_at(c.mu, 1);
  const double composite = c.budget - (p1_1 * c.x1_min) * p1_2;
  detail::require(composite != 0.0, "unsimplified stage 1: composite factor is zero");
  return mu / composite *
             (composite / p1_2 * (c.budget - p2_2 * c.x2_min) - composite * c.x1_min) +
         c.x1_min;
}

struct AggregateDemand {
  double x1 = 0.0;
  double x2 = 0.0;
  DomainKind kind = DomainKind::convex;
  bool infeasible = false;
};

namespace detail {

inline void require_market_member(const Consumer& c) {
  require(c.budget >= 0.0 && std::isfinite(c.budget), "market: budget must be non-negative");
  require(c.x1_min >= 0.0 && c.x2_min >= 0.0, "market: minimums must be non-negative");
  require_unit_interval(c.mu, "mu");
  require_unit_interval(c.phi, "phi");
}

// Summed budgets and minimums; per-slab motives replaced by their maximum.
inline Consumer pooled_consumer(std::span<const Consumer> market, std::size_t slabs) {
  Consumer pooled;
  pooled.budget = 0.0;
  pooled.mu.assign(slabs, 0.0);
  pooled.phi.assign(slabs, 0.0);
  for (const Consumer& c : market) {
    pooled.budget += c.budget;
    pooled.x1_min += c.x1_min;
    pooled.x2_min += c.x2_min;
    for (std::size_t k = 0; k < slabs; ++k) {
      pooled.mu[k] = std::max(pooled.mu[k], motive_at(c.mu, k));
      pooled.phi[k] = std::max(pooled.phi[k], motive_at(c.phi, k));
    }
  }
  return pooled;
}

// Index of the consumer holding the largest motive (first on ties) and the
// largest motive among everyone else. A singleton market reuses its own
// motive for the second slot.
struct LeaderSplit {
  std::size_t leader = 0;
  double leader_motive = 0.0;
  double runner_up_motive = 0.0;
};

template <class MotiveOf>
LeaderSplit split_leader(std::span<const Consumer> market, MotiveOf motive_of) {
  LeaderSplit s;
  s.leader_motive = motive_of(market[0]);
  for (std::size_t i = 1; i < market.size(); ++i) {
    const double m = motive_of(market[i]);
    if (m > s.leader_motive) {
      s.leader = i;
      s.leader_motive = m;
    }
  }
  s.runner_up_motive = market.size() == 1 ? s.leader_motive : 0.0;
  for (std::size_t i = 0; i < market.size(); ++i) {
    if (i != s.leader) s.runner_up_motive = std::max(s.runner_up_motive, motive_of(market[i]));
  }
  return s;
}

}  // namespace detail

// Market demand at the domain's posted prices.
//
// Convex and non-convex markets pool budgets and minimums and take the largest
// motive. In the mixed case the consumer with the largest motive is weighted
// by that motive and the rest of the market by the runner-up motive, each on
// the budget line of the slab chosen for the pooled market.
inline AggregateDemand aggregate_demand(std::span<const Consumer> market, const DomainSpec& domain) {
  detail::require(!market.empty(), "aggregate_demand: empty market");
  validate(domain);
  for (const Consumer& c : market) detail::require_market_member(c);

  const std::size_t slabs = std::max(domain.offer1.slabs.size(), domain.offer2.slabs.size());
  const Consumer pooled = detail::pooled_consumer(market, slabs);
  AggregateDemand out;
  out.kind = domain.kind;

  switch (domain.kind) {
    case DomainKind::convex: {
      const PairDemand d = demand_convex_pair(pooled, domain.offer1.slabs[0].unit_price,
                                              domain.offer2.slabs[0].unit_price);
      out.x1 = d.x1;
      out.x2 = d.x2;
      out.infeasible = d.infeasible;
      return out;
    }
    case DomainKind::non_convex: {
      const NonConvexDemand d = demand_nonconvex_pair(pooled, domain.offer1, domain.offer2);
      out.x1 = d.x1_stage1;
      out.x2 = d.x2_stage1;
      return out;
    }
    case DomainKind::mixed: break;
  }

  // Orient so that `linear` is the single-slab offer.
  const bool first_is_linear = domain.offer1.is_linear_price();
  const Offer& linear = first_is_linear ? domain.offer1 : domain.offer2;
  const Offer& stepped = first_is_linear ? domain.offer2 : domain.offer1;
  auto lin_min = [&](const Consumer& c) { return first_is_linear ? c.x1_min : c.x2_min; };
  auto step_min = [&](const Consumer& c) { return first_is_linear ? c.x2_min : c.x1_min; };

  const double p_lin = linear.slabs[0].unit_price;
  const std::size_t k = select_affordable_slab(pooled.budget, p_lin, lin_min(pooled), stepped,
                                               step_min(pooled));
  if (k == stepped.slabs.size()) {
    detail::fail(ErrorCategory::infeasible, "aggregate_demand: no slab affordable for the market");
  }
  const double p_step = stepped.slabs[k].unit_price;

  auto lin_motive = [&](const Consumer& c) {
    return first_is_linear ? motive_at(c.mu, 0) : motive_at(c.phi, 0);
  };
  auto step_motive = [&](const Consumer& c) {
    return first_is_linear ? motive_at(c.phi, k) : motive_at(c.mu, k);
  };

  // One group's contribution above its minimums on the chosen budget line.
  auto surplus = [&](std::span<const Consumer> group, std::size_t skip, bool linear_side) {
    double budget = 0.0, own_min = 0.0, other_min = 0.0;
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (i == skip) continue;
      budget += group[i].budget;
      own_min += linear_side ? lin_min(group[i]) : step_min(group[i]);
      other_min += linear_side ? step_min(group[i]) : lin_min(group[i]);
    }
    const double own_p = linear_side ? p_lin : p_step;
    const double other_p = linear_side ? p_step : p_lin;
    return ((budget - other_p * other_min) - own_p * own_min) / own_p;
  };
  auto side_demand = [&](bool linear_side) {
    const auto split = linear_side ? detail::split_leader(market, lin_motive)
                                   : detail::split_leader(market, step_motive);
    const std::span<const Consumer> leader = market.subspan(split.leader, 1);
    double mins = 0.0;
    for (const Consumer& c : market) mins += linear_side ? lin_min(c) : step_min(c);
    return mins + split.leader_motive * surplus(leader, leader.size(), linear_side) +
           split.runner_up_motive * surplus(market, split.leader, linear_side);
  };

  const double lin_qty = side_demand(true);
  const double step_qty = side_demand(false);
  out.x1 = first_is_linear ? lin_qty : step_qty;
  out.x2 = first_is_linear ? step_qty : lin_qty;
  return out;
}

}  // namespace slabprice
