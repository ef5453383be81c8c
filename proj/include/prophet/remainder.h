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

#ifndef PROPHET_REMAINDER_H_
#define PROPHET_REMAINDER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "prophet/element_set.h"
#include "prophet/matroid.h"
#include "prophet/weights.h"

namespace prophet {

// Partition of the max-weight basis B into remainder R (A + R is a basis) and
// cost C = B - R.
struct RemainderResult {
  ElementSet remainder;
  ElementSet cost;
  ElementSet base;
};

// R(A) is the max-weight basis of M / A; B the max-weight basis of M.
// Throws InputError when A is dependent.
RemainderResult Remainder(const MatroidPtr& m, std::span<const double> w,
                          const ElementSet& a);

struct IntersectionRemainder {
  // (R_j, C_j) for each constraint j.
  std::vector<std::pair<ElementSet, ElementSet>> per_matroid;
  ElementSet remainder;  // intersection of the R_j
  ElementSet cost;       // union of the C_j
  ElementSet base;
};

bool FeasibleInAll(std::span<const MatroidPtr> matroids, const ElementSet& s);

inline constexpr std::size_t kMaxSearchNodes = 2'000'000;

// Maximum-weight set independent in every matroid. A single matroid uses the
// greedy basis. Otherwise feasible sets over the positive-weight elements are
// enumerated depth-first in lexicographic order with a weight bound; the
// lexicographically first maximizer is returned. Throws RefusedError when
// the search exceeds `node_cap` nodes.
ElementSet MaxWeightFeasibleIntersection(std::span<const MatroidPtr> matroids,
                                         std::span<const double> w,
                                         std::size_t node_cap = kMaxSearchNodes);

// Greedy remainder inside one constraint: scan `base_order` (the elements of
// B by descending weight), skip members of A, keep x when A + R + x stays
// independent in `m`.
ElementSet GreedyRemainder(const Matroid& m, std::span<const Element> base_order,
                           const ElementSet& a);

// (R_j, C_j) for constraint j with B = MaxWeightFeasibleIntersection.
std::pair<ElementSet, ElementSet> RemainderJ(std::span<const MatroidPtr> matroids,
                                             std::span<const double> w,
                                             const ElementSet& a, int j);

IntersectionRemainder RemainderAll(std::span<const MatroidPtr> matroids,
                                   std::span<const double> w,
                                   const ElementSet& a);

// True when every element of `base` lies in the closure of A + R in `m`.
bool SpansBase(const Matroid& m, const ElementSet& a, const ElementSet& r,
               const ElementSet& base);

// Expectations of remainder and cost weights over the fresh draw w'. The
// max-weight feasible set of each bank sample is computed once. When built
// with a second, independent bank the two terms of a difference are averaged
// over different draws (no common random numbers).
class RemainderOracle {
 public:
  RemainderOracle(std::vector<MatroidPtr> matroids, SampleBank bank,
                  std::optional<SampleBank> independent_bank = std::nullopt);

  const std::vector<MatroidPtr>& matroids() const { return matroids_; }
  int num_matroids() const { return static_cast<int>(matroids_.size()); }
  const SampleBank& bank() const { return primary_.samples; }
  bool exact() const { return primary_.samples.exact(); }
  bool has_independent_bank() const { return independent_.has_value(); }

  const ElementSet& BaseOf(std::size_t sample) const {
    return primary_.bases[sample];
  }
  // w'(R_j(A)) for one bank sample.
  double RemainderWeight(std::size_t sample, const ElementSet& a, int j) const;
  double CostWeight(std::size_t sample, const ElementSet& a, int j) const;
  ElementSet RemainderSet(std::size_t sample, const ElementSet& a, int j) const;

  Estimate ExpectedRemainder(const ElementSet& a, int j) const;
  Estimate ExpectedCost(const ElementSet& a, int j) const;
  // E[w'(R_j(A)) - w'(R_j(A + x))].
  Estimate ExpectedRemainderDrop(const ElementSet& a, Element x, int j) const;
  // E[w'(C_j(A + x)) - w'(C_j(A))].
  Estimate ExpectedCostRise(const ElementSet& a, Element x, int j) const;
  // E[OPT(w')].
  Estimate ExpectedOptimum() const;

 private:
  struct Bank {
    SampleBank samples;
    std::vector<ElementSet> bases;
    std::vector<std::vector<Element>> base_orders;
    std::vector<double> base_weights;
  };
  static Bank Prepare(const std::vector<MatroidPtr>& matroids, SampleBank bank);
  double RemainderWeightIn(const Bank& bank, std::size_t sample,
                           const ElementSet& a, int j) const;

  std::vector<MatroidPtr> matroids_;
  Bank primary_;
  std::optional<Bank> independent_;
};

// E[w'(R(A))] for a single matroid.
Estimate ExpectedRemainderWeight(const MatroidPtr& m,
                                 const WeightProfile& profile,
                                 const ElementSet& a,
                                 const Estimator& estimator);
// E[w'(R_j(A))] for constraint j of an intersection.
Estimate ExpectedRemainderWeightJ(const std::vector<MatroidPtr>& matroids,
                                  const WeightProfile& profile,
                                  const ElementSet& a, int j,
                                  const Estimator& estimator);

}  // namespace prophet

#endif  // PROPHET_REMAINDER_H_
