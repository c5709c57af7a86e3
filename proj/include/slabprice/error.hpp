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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slabprice {

// Every failure surfaced by the library carries one of these categories. The
// CLI maps them onto process exit codes.
enum class ErrorCategory {
  usage,             // bad command line, conflicting output path
  schema,            // malformed scenario document
  invalid_argument,  // a value violates a documented invariant
  infeasible,        // no affordable / positive-demand configuration exists
  numerical,         // root finding or a derived quantity is undefined
};

constexpr std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::schema: return "schema";
    case ErrorCategory::invalid_argument: return "invariant";
    case ErrorCategory::infeasible: return "infeasible";
    case ErrorCategory::numerical: return "numerical";
  }
  return "unknown";
}

constexpr int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage: return 2;
    case ErrorCategory::schema: return 3;
    case ErrorCategory::invalid_argument: return 3;
    case ErrorCategory::infeasible: return 4;
    case ErrorCategory::numerical: return 5;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCategory::invalid_argument, message);
}

}  // namespace detail
}  // namespace slabprice
