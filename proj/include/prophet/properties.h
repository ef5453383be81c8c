// Copyright 2026 The Authors.
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

#ifndef PROPHET_PROPERTIES_H_
#define PROPHET_PROPERTIES_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prophet/instance.h"
#include "prophet/policy.h"

namespace prophet {

struct PropertyResult {
  PropertyResult() = default;
  explicit PropertyResult(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  std::size_t checks = 0;
  std::string witness;  // first violation, empty when passed
  std::string note;

  void Fail(std::string w) {
    if (passed) witness = std::move(w);
    passed = false;
  }
};

struct PropertyReport {
  std::string instance;
  std::vector<PropertyResult> results;

  bool AllPassed() const;
  const PropertyResult* Find(const std::string& name) const;
};

struct PropertyOptions {
  // Outcomes visited by the per-outcome checks, spread evenly over the
  // outcome table; 0 visits every outcome.
  std::size_t depth = 0;
  // Orders replayed per outcome: identity, reverse, then seeded shuffles.
  int orders = 3;
  // Values other than 1 run the traces with scaled thresholds (mutation).
  double threshold_scale = 1.0;
  // 0 selects 2 for one matroid and 2p for p matroids.
  double alpha = 0;
  std::uint64_t seed = 1;
  // Adversaries in the approximation check.
  bool adaptive = true;
};

// Exact-mode invariant suite for one instance. Refuses n > 16 and outcome
// tables above 10^5 entries.
PropertyReport RunPropertySuite(const Instance& instance,
                                const PropertyOptions& options = {});

// Samples weights and orders, raises one revealed weight and replays. A
// violation is an accept that turns into a reject, or any change in the
// decisions before the raised element.
PropertyResult MonotonicityReplays(const Instance& instance,
                                   const ThresholdPolicy& policy, int replays,
                                   std::uint64_t seed);

// Guarantee factor of the balanced policy: 1/alpha for one matroid and
// (alpha - p) / (alpha (alpha - 1)) for p matroids.
double GuaranteeFactor(int p, double alpha);

std::string PropertyReportJson(const std::vector<PropertyReport>& reports);

}  // namespace prophet

#endif  // PROPHET_PROPERTIES_H_
