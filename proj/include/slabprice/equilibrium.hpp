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

// Platform supply line and the demand/supply crossing.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include "slabprice/demand.hpp"
#include "slabprice/error.hpp"

namespace slabprice {

struct PriceQuantity {
  double price = 0.0;
  double quantity = 0.0;

  bool operator==(const PriceQuantity&) const = default;
};

enum class FitMethod { two_point, least_squares };

inline std::string_view to_string(FitMethod m) {
  return m == FitMethod::two_point ? "two_point" : "least_squares";
}

// price = slope * quantity + intercept
struct SupplyLine {
  double slope = 0.0;
  double intercept = 0.0;
  FitMethod method = FitMethod::two_point;
  std::vector<PriceQuantity> source;

  double price_at(double quantity) const { return slope * quantity + intercept; }
};

inline SupplyLine fit_supply_line(std::span<const PriceQuantity> pairs, FitMethod method) {
  detail::require(pairs.size() >= 2, "fit_supply_line: need at least two pairs");
  SupplyLine line;
  line.method = method;
  line.source.assign(pairs.begin(), pairs.end());
  if (method == FitMethod::two_point) {
    const PriceQuantity& a = pairs[0];
    const PriceQuantity& b = pairs[1];
    detail::require(a.quantity != b.quantity, "fit_supply_line: duplicate quantities");
    line.slope = (b.price - a.price) / (b.quantity - a.quantity);
    line.intercept = a.price - line.slope * a.quantity;
  } else {
    const double n = static_cast<double>(pairs.size());
    double mean_q = 0.0, mean_p = 0.0;
    for (const auto& pq : pairs) {
      mean_q += pq.quantity;
      mean_p += pq.price;
    }
    mean_q /= n;
    mean_p /= n;
    double sqq = 0.0, sqp = 0.0;
    for (const auto& pq : pairs) {
      sqq += (pq.quantity - mean_q) * (pq.quantity - mean_q);
      sqp += (pq.quantity - mean_q) * (pq.price - mean_p);
    }
    detail::require(sqq > 0.0, "fit_supply_line: quantities are all equal");
    line.slope = sqp / sqq;
    line.intercept = mean_p - line.slope * mean_q;
  }
  detail::require(line.slope > 0.0, "fit_supply_line: supply slope must be positive");
  return line;
}

struct Equilibrium {
  double price = 0.0;
  double quantity = 0.0;
  int iterations = 0;
};

namespace detail {

template <class DemandFn>
DemandValue evaluate_demand(DemandFn& demand, double price) {
  using R = std::invoke_result_t<DemandFn&, double>;
  if constexpr (std::is_same_v<std::decay_t<R>, DemandValue>) {
    return demand(price);
  } else {
    return DemandValue{static_cast<double>(demand(price)), false};
  }
}

}  // namespace detail

// Fixed point q* = demand(supply(q*)) located by bisection on
// g(q) = demand(supply(q)) - q over [q_lo, q_hi]. Bisection runs until the
// bracket collapses to adjacent doubles; the result must satisfy
// |g| < 1e-9 * q_hi. `demand` maps price to quantity and may return either a
// plain double or a DemandValue.
template <class DemandFn>
Equilibrium solve_equilibrium(DemandFn&& demand, const SupplyLine& supply, double q_lo,
                              double q_hi) {
  detail::require(q_lo < q_hi && std::isfinite(q_lo) && std::isfinite(q_hi),
                  "solve_equilibrium: bracket must satisfy q_lo < q_hi");
  auto g = [&](double q, bool* infeasible) {
    const double p = supply.price_at(q);
    if (!(p > 0.0)) detail::fail(ErrorCategory::numerical, "solve_equilibrium: supply price not positive on bracket");
    const DemandValue x = detail::evaluate_demand(demand, p);
    if (infeasible != nullptr) *infeasible = x.infeasible;
    return x.quantity - q;
  };

  bool lo_infeasible = false, hi_infeasible = false;
  double g_lo = g(q_lo, &lo_infeasible);
  const double g_hi = g(q_hi, &hi_infeasible);
  if (lo_infeasible && hi_infeasible) {
    detail::fail(ErrorCategory::infeasible, "solve_equilibrium: demand infeasible on the bracket");
  }
  const double tolerance = 1e-9 * std::abs(q_hi);
  Equilibrium eq;
  if (g_lo == 0.0) return {supply.price_at(q_lo), q_lo, 0};
  if (g_hi == 0.0) return {supply.price_at(q_hi), q_hi, 0};
  if ((g_lo < 0.0) == (g_hi < 0.0)) {
    detail::fail(ErrorCategory::numerical, "solve_equilibrium: no sign change on the bracket");
  }

  double lo = q_lo, hi = q_hi;
  double mid = 0.5 * (lo + hi);
  double g_mid = 0.0;
  for (eq.iterations = 1; eq.iterations <= 2000; ++eq.iterations) {
    mid = 0.5 * (lo + hi);
    g_mid = g(mid, nullptr);
    if (g_mid == 0.0 || mid <= lo || mid >= hi) break;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  if (!(std::abs(g_mid) < tolerance) && g_mid != 0.0) {
    detail::fail(ErrorCategory::numerical, "solve_equilibrium: did not converge to tolerance");
  }
  eq.quantity = mid;
  eq.price = supply.price_at(mid);
  return eq;
}

}  // namespace slabprice
