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

// Consumer-motive curves and the two-way consistency predicate over finite
// choice sets.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>

#include "slabprice/error.hpp"

namespace slabprice {

enum class MembershipForm {
  linear,
  parabolic,           // t^2: slow start, risk-taking consumer
  reversed_parabolic,  // 1 - (1 - t)^2: fast start, risk-averse consumer
};

// Degree-of-preference curve rising from 0 at `f0` (fully unacceptable) to 1
// at `f1` (fully desirable).
struct MembershipSpec {
  MembershipForm form = MembershipForm::linear;
  double f0 = 0.0;
  double f1 = 1.0;

  bool operator==(const MembershipSpec&) const = default;
};

inline void validate(const MembershipSpec& spec) {
  detail::require(std::isfinite(spec.f0) && std::isfinite(spec.f1),
                  "membership: f0 and f1 must be finite");
  detail::require(spec.f1 > spec.f0, "membership: f1 must exceed f0");
}

inline double eval_membership(const MembershipSpec& spec, double x) {
  validate(spec);
  double t = (x - spec.f0) / (spec.f1 - spec.f0);
  if (x <= spec.f0 || std::isnan(t)) t = 0.0;
  if (x >= spec.f1) t = 1.0;
  t = std::clamp(t, 0.0, 1.0);
  switch (spec.form) {
    case MembershipForm::linear: return t;
    case MembershipForm::parabolic: return t * t;
    case MembershipForm::reversed_parabolic: return 1.0 - (1.0 - t) * (1.0 - t);
  }
  return t;
}

// Fuzzy union of individual degrees, i.e. their maximum.
inline double aggregate_degree(std::span<const double> degrees) {
  detail::require(!degrees.empty(), "aggregate_degree: empty degree list");
  double best = 0.0;
  for (double d : degrees) {
    detail::require(d >= 0.0 && d <= 1.0, "aggregate_degree: degree outside [0,1]");
    best = std::max(best, d);
  }
  return best;
}

using ChoiceSet = std::set<std::string>;

// A finite universe of alternatives with a degree of preference per item. The
// universe is the key set of `degree`.
struct ChoiceProblem {
  std::map<std::string, double> degree;

  bool contains(const std::string& item) const { return degree.contains(item); }
};

enum class Consistency { consistent, inconsistent, not_applicable };

inline std::string_view to_string(Consistency c) {
  switch (c) {
    case Consistency::consistent: return "consistent";
    case Consistency::inconsistent: return "inconsistent";
    case Consistency::not_applicable: return "not_applicable";
  }
  return "unknown";
}

// Argmax of the degree map over `subset`. Ties go to the lexicographically
// lowest identifier.
inline std::string choose(const ChoiceProblem& problem, const ChoiceSet& subset) {
  detail::require(!subset.empty(), "choose: empty choice set");
  const std::string* best = nullptr;
  double best_degree = 0.0;
  for (const auto& item : subset) {
    auto it = problem.degree.find(item);
    detail::require(it != problem.degree.end(), "choose: item '" + item + "' has no degree");
    if (best == nullptr || it->second > best_degree) {
      best = &item;
      best_degree = it->second;
    }
  }
  return *best;
}

// Checks the nested-set condition with possibly different degree maps on the
// small set `s1` and the large set `s2`.
inline Consistency two_way_consistency_check(const ChoiceProblem& on_small,
                                             const ChoiceProblem& on_large,
                                             const ChoiceSet& s1, const ChoiceSet& s2) {
  detail::require(!on_large.degree.empty(), "consistency: empty universe");
  detail::require(!s1.empty(), "consistency: s1 is empty");
  for (const auto& item : s1) {
    detail::require(s2.contains(item), "consistency: s1 is not a subset of s2");
  }
  for (const auto& item : s2) {
    detail::require(on_large.contains(item), "consistency: s2 is not a subset of the universe");
  }
  const std::string large_choice = choose(on_large, s2);
  if (!s1.contains(large_choice)) return Consistency::not_applicable;
  const std::string small_choice = choose(on_small, s1);
  return small_choice == large_choice ? Consistency::consistent : Consistency::inconsistent;
}

inline Consistency two_way_consistency_check(const ChoiceProblem& problem, const ChoiceSet& s1,
                                             const ChoiceSet& s2) {
  return two_way_consistency_check(problem, problem, s1, s2);
}

}  // namespace slabprice
