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

// Single-slab price-response function and its local properties.
//
//   x(p) = (1 - mu) x_own_min + mu m / p - mu (p_other / p) x_other_min
//
// Slope, hazard rate and elasticity are evaluated from their defining ratios
// on the unclamped response.

#pragma once

#include <array>
#include <cmath>

#include "slabprice/demand.hpp"
#include "slabprice/error.hpp"

namespace slabprice {

struct ResponseContext {
  double motive = 0.0;       // mu^k
  double budget = 0.0;       // m
  double other_price = 0.0;  // p_j^k
  double own_min = 0.0;      // x_{i,min}^k
  double other_min = 0.0;    // x_{j,min}^k

  // Money committed to the other commodity's minimum.
  double other_spend() const { return other_price * other_min; }

  bool operator==(const ResponseContext&) const = default;
};

inline void validate(const ResponseContext& ctx) {
  detail::require(ctx.motive >= 0.0 && ctx.motive <= 1.0, "response: motive must lie in [0,1]");
  detail::require(ctx.budget > 0.0, "response: budget must be positive");
  detail::require(ctx.other_price > 0.0, "response: other_price must be positive");
  detail::require(ctx.own_min > 0.0 && ctx.other_min > 0.0,
                  "response: minimum quantities must be positive");
}

inline double unclamped_response(const ResponseContext& ctx, double p) {
  detail::require_price(p, "price_response");
  return detail::motive_demand(ctx.motive, ctx.budget, p, ctx.other_price, ctx.own_min,
                               ctx.other_min);
}

inline DemandValue price_response(const ResponseContext& ctx, double p) {
  return detail::clamp_demand(unclamped_response(ctx, p));
}

inline double response_slope(const ResponseContext& ctx, double p) {
  detail::require_price(p, "response_slope");
  return ctx.motive * (ctx.other_spend() - ctx.budget) / (p * p);
}

namespace detail {

inline double positive_demand(const ResponseContext& ctx, double p, const char* what) {
  const DemandValue x = price_response(ctx, p);
  if (x.infeasible || x.quantity <= 0.0) {
    fail(ErrorCategory::numerical, std::string(what) + ": demand is zero at this price");
  }
  return x.quantity;
}

}  // namespace detail

// h(p) = -x'(p) / x(p)
inline double hazard_rate(const ResponseContext& ctx, double p) {
  const double x = detail::positive_demand(ctx, p, "hazard_rate");
  return -response_slope(ctx, p) / x;
}

// e(p) = -x'(p) p / x(p)
inline double point_elasticity(const ResponseContext& ctx, double p) {
  const double x = detail::positive_demand(ctx, p, "point_elasticity");
  return -response_slope(ctx, p) * p / x;
}

inline double arc_elasticity(const ResponseContext& ctx, double p1, double p2) {
  detail::require_price(p2, "arc_elasticity");
  detail::require(p1 != p2, "arc_elasticity: prices must differ");
  const double x1 = detail::positive_demand(ctx, p1, "arc_elasticity");
  const double x2 = price_response(ctx, p2).quantity;
  return -((x2 - x1) / x1) / ((p2 - p1) / p1);
}

// Reference prices at which willingness to pay is tabulated by default.
inline constexpr std::array<double, 2> kWtpReferencePrices{0.01, 0.001};

// w(p; p_ref) = -x'(p) / x(p_ref). The response diverges as p_ref -> 0 when
// m > p_j x_j,min, so a zero reference price yields 0.
inline double willingness_to_pay(const ResponseContext& ctx, double p, double p_ref) {
  detail::require_price(p, "willingness_to_pay");
  detail::require(p_ref >= 0.0 && std::isfinite(p_ref),
                  "willingness_to_pay: reference price must be non-negative");
  const double slope = response_slope(ctx, p);
  if (p_ref == 0.0) {
    const double lead = ctx.motive * (ctx.budget - ctx.other_spend());
    if (lead > 0.0) return 0.0;
    const double base = (1.0 - ctx.motive) * ctx.own_min;
    if (lead == 0.0 && base > 0.0) return -slope / base;
    detail::fail(ErrorCategory::numerical, "willingness_to_pay: reference demand is not positive");
  }
  const double reference = detail::positive_demand(ctx, p_ref, "willingness_to_pay");
  return -slope / reference;
}

}  // namespace slabprice
