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

// Monte Carlo walk through a slab plan, used as an independent check on the
// closed-form expected revenue.
//
// Random numbers come from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Trials are cut into fixed-size chunks; chunk c draws from
// its own generator seeded with the c-th SplitMix64 output of the user seed.
// Uniform variates take the top 53 bits of each 64-bit draw. Workers only
// accumulate integer purchase counts, so the result does not depend on the
// thread count or on scheduling.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "slabprice/error.hpp"
#include "slabprice/revenue.hpp"

namespace slabprice {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed of the generator driving chunk `chunk`.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t chunk) {
  std::uint64_t state = seed + chunk * 0x9E3779B97F4A7C15ULL;
  return splitmix64(state);
}

// Uniform double in [0, 1).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct ConsumerOutcome {
  std::optional<std::size_t> slab;  // 0-based slab purchased, if any
  double revenue = 0.0;
};

// One consumer walking slabs 1..min(y, N), accepting slab k with probability
// lambda_k. `slab_revenue[k]` is x(p_k) * p_k.
inline ConsumerOutcome simulate_consumer(const SlabPlan& plan, std::span<const double> slab_revenue,
                                         std::mt19937_64& rng) {
  for (std::size_t k = 0; k < plan.reachable(); ++k) {
    if (uniform01(rng) < plan.lambda[k]) return {k, slab_revenue[k]};
  }
  return {std::nullopt, 0.0};
}

struct SimConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> purchases;  // per slab
  std::uint64_t no_purchase = 0;
  std::vector<double> slab_revenue;

  double frequency(std::size_t slab) const {
    return static_cast<double>(purchases.at(slab)) / static_cast<double>(trials);
  }
};

inline constexpr std::uint64_t kTrialsPerChunk = 1u << 16;

template <class DemandFn>
MonteCarloEstimate estimate_expected_revenue_mc(const SlabPlan& plan, DemandFn&& demand,
                                                const SimConfig& config) {
  validate(plan);
  detail::require(config.trials >= 1, "simulate: trials must be at least 1");
  const std::size_t n_slabs = plan.slabs.size();

  MonteCarloEstimate est;
  est.trials = config.trials;
  est.slab_revenue.resize(n_slabs);
  for (std::size_t k = 0; k < n_slabs; ++k) {
    const DemandValue x = demand(k, plan.slabs[k]);
    est.slab_revenue[k] = x.quantity * plan.slabs[k].price;
  }

  const std::uint64_t chunks = (config.trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, chunks));

  // counts[w][k]; index n_slabs holds "no purchase"
  std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(n_slabs + 1));
  auto run = [&](unsigned w) {
    auto& local = counts[w];
    for (std::uint64_t c = w; c < chunks; c += workers) {
      std::mt19937_64 rng(substream_seed(config.seed, c));
      const std::uint64_t begin = c * kTrialsPerChunk;
      const std::uint64_t end = std::min(config.trials, begin + kTrialsPerChunk);
      for (std::uint64_t t = begin; t < end; ++t) {
        const ConsumerOutcome o = simulate_consumer(plan, est.slab_revenue, rng);
        ++local[o.slab ? *o.slab : n_slabs];
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  est.purchases.assign(n_slabs, 0);
  for (const auto& local : counts) {
    for (std::size_t k = 0; k < n_slabs; ++k) est.purchases[k] += local[k];
    est.no_purchase += local[n_slabs];
  }

  const double n = static_cast<double>(config.trials);
  for (std::size_t k = 0; k < n_slabs; ++k) {
    est.mean += (static_cast<double>(est.purchases[k]) / n) * est.slab_revenue[k];
  }
  if (config.trials > 1) {
    double ss = static_cast<double>(est.no_purchase) * est.mean * est.mean;
    for (std::size_t k = 0; k < n_slabs; ++k) {
      const double d = est.slab_revenue[k] - est.mean;
      ss += static_cast<double>(est.purchases[k]) * d * d;
    }
    est.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return est;
}

inline MonteCarloEstimate estimate_expected_revenue_mc(const SlabPlan& plan,
                                                       const SimConfig& config) {
  return estimate_expected_revenue_mc(plan, ResponseDemand{}, config);
}

}  // namespace slabprice
