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

#include "prophet/remainder.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "prophet/errors.h"

namespace prophet {
namespace {

std::vector<Element> DescendingOrder(const ElementSet& s,
                                     std::span<const double> w) {
  std::vector<Element> order = s.Elements();
  std::stable_sort(order.begin(), order.end(),
                   [&](Element a, Element b) { return w[a] > w[b]; });
  return order;
}

void CheckWeights(std::span<const MatroidPtr> matroids,
                  std::span<const double> w) {
  if (matroids.empty()) throw InputError("at least one matroid is required");
  if (w.size() < static_cast<std::size_t>(matroids[0]->universe_size())) {
    throw InputError("weight vector shorter than the ground set");
  }
}

}  // namespace

RemainderResult Remainder(const MatroidPtr& m, std::span<const double> w,
                          const ElementSet& a) {
  if (!m->IsIndependent(a)) {
    throw InputError("remainder needs an independent set, got " + a.ToString());
  }
  RemainderResult result;
  result.base = MaxWeightBasis(*m, w);
  result.remainder = MaxWeightBasis(*Contract(m, a), w);
  if (!result.remainder.IsSubsetOf(result.base)) {
    throw std::logic_error("remainder escaped the max-weight basis");
  }
  result.cost = result.base.Minus(result.remainder);
  return result;
}

bool FeasibleInAll(std::span<const MatroidPtr> matroids, const ElementSet& s) {
  for (const MatroidPtr& m : matroids) {
    if (!m->IsIndependent(s)) return false;
  }
  return true;
}

ElementSet MaxWeightFeasibleIntersection(std::span<const MatroidPtr> matroids,
                                         std::span<const double> w,
                                         std::size_t node_cap) {
  CheckWeights(matroids, w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0) throw InputError("negative weight");
  }
  if (matroids.size() == 1) return MaxWeightBasis(*matroids[0], w);

  ElementSet ground = matroids[0]->ground();
  for (const MatroidPtr& m : matroids) ground = ground.Intersect(m->ground());
  std::vector<Element> candidates;
  ground.ForEach([&](Element x) {
    if (w[x] > 0) candidates.push_back(x);
  });
  // suffix[i] = total weight of candidates[i..].
  std::vector<double> suffix(candidates.size() + 1, 0.0);
  for (std::size_t i = candidates.size(); i-- > 0;) {
    suffix[i] = suffix[i + 1] + w[candidates[i]];
  }

  ElementSet best;
  double best_weight = 0;
  std::size_t nodes = 0;
  ElementSet current;
  // Preorder over increasing identifiers visits sets in lexicographic order,
  // so a strict improvement test keeps the lexicographically first optimum.
  std::function<void(std::size_t, double)> search = [&](std::size_t start,
                                                         double weight) {
    if (++nodes > node_cap) {
      throw RefusedError("max-weight feasible set search exceeded " +
                         std::to_string(node_cap) + " nodes");
    }
    if (weight > best_weight) {
      best_weight = weight;
      best = current;
    }
    for (std::size_t i = start; i < candidates.size(); ++i) {
      if (weight + suffix[i] <= best_weight) return;
      const Element x = candidates[i];
      current.Insert(x);
      if (FeasibleInAll(matroids, current)) search(i + 1, weight + w[x]);
      current.Erase(x);
    }
  };
  search(0, 0.0);
  return best;
}

ElementSet GreedyRemainder(const Matroid& m, std::span<const Element> base_order,
                           const ElementSet& a) {
  ElementSet r;
  ElementSet with_a = a;
  for (Element x : base_order) {
    if (a.Contains(x)) continue;
    ElementSet candidate = with_a.With(x);
    if (m.IsIndependent(candidate)) {
      with_a = std::move(candidate);
      r.Insert(x);
    }
  }
  return r;
}

std::pair<ElementSet, ElementSet> RemainderJ(std::span<const MatroidPtr> matroids,
                                             std::span<const double> w,
                                             const ElementSet& a, int j) {
  if (j < 0 || static_cast<std::size_t>(j) >= matroids.size()) {
    throw InputError("matroid index out of range");
  }
  if (!FeasibleInAll(matroids, a)) {
    throw InputError("remainder needs a feasible set, got " + a.ToString());
  }
  const ElementSet base = MaxWeightFeasibleIntersection(matroids, w);
  const std::vector<Element> order = DescendingOrder(base, w);
  ElementSet r = GreedyRemainder(*matroids[j], order, a);
  return {r, base.Minus(r)};
}

IntersectionRemainder RemainderAll(std::span<const MatroidPtr> matroids,
                                   std::span<const double> w,
                                   const ElementSet& a) {
  if (!FeasibleInAll(matroids, a)) {
    throw InputError("remainder needs a feasible set, got " + a.ToString());
  }
  IntersectionRemainder result;
  result.base = MaxWeightFeasibleIntersection(matroids, w);
  const std::vector<Element> order = DescendingOrder(result.base, w);
  result.remainder = result.base;
  for (const MatroidPtr& m : matroids) {
    ElementSet r = GreedyRemainder(*m, order, a);
    ElementSet c = result.base.Minus(r);
    result.remainder = result.remainder.Intersect(r);
    result.cost = result.cost.Union(c);
    result.per_matroid.emplace_back(std::move(r), std::move(c));
  }
  return result;
}

bool SpansBase(const Matroid& m, const ElementSet& a, const ElementSet& r,
               const ElementSet& base) {
  return base.IsSubsetOf(Closure(m, a.Union(r)));
}

RemainderOracle::RemainderOracle(std::vector<MatroidPtr> matroids,
                                 SampleBank bank,
                                 std::optional<SampleBank> independent_bank)
    : matroids_(std::move(matroids)) {
  if (matroids_.empty()) throw InputError("at least one matroid is required");
  primary_ = Prepare(matroids_, std::move(bank));
  if (independent_bank) {
    independent_ = Prepare(matroids_, std::move(*independent_bank));
  }
}

RemainderOracle::Bank RemainderOracle::Prepare(
    const std::vector<MatroidPtr>& matroids, SampleBank samples) {
  Bank bank{std::move(samples), {}, {}, {}};
  bank.bases.reserve(bank.samples.size());
  for (std::size_t i = 0; i < bank.samples.size(); ++i) {
    const WeightVector& w = bank.samples[i].weights;
    ElementSet base = MaxWeightFeasibleIntersection(matroids, w);
    bank.base_orders.push_back(DescendingOrder(base, w));
    bank.base_weights.push_back(SetWeight(base, w));
    bank.bases.push_back(std::move(base));
  }
  return bank;
}

double RemainderOracle::RemainderWeightIn(const Bank& bank, std::size_t sample,
                                          const ElementSet& a, int j) const {
  const ElementSet r =
      GreedyRemainder(*matroids_[j], bank.base_orders[sample], a);
  return SetWeight(r, bank.samples[sample].weights);
}

double RemainderOracle::RemainderWeight(std::size_t sample, const ElementSet& a,
                                        int j) const {
  return RemainderWeightIn(primary_, sample, a, j);
}

double RemainderOracle::CostWeight(std::size_t sample, const ElementSet& a,
                                   int j) const {
  const ElementSet r = RemainderSet(sample, a, j);
  return SetWeight(primary_.bases[sample].Minus(r),
                   primary_.samples[sample].weights);
}

ElementSet RemainderOracle::RemainderSet(std::size_t sample, const ElementSet& a,
                                         int j) const {
  return GreedyRemainder(*matroids_[j], primary_.base_orders[sample], a);
}

Estimate RemainderOracle::ExpectedRemainder(const ElementSet& a, int j) const {
  return primary_.samples.Average(
      [&](std::size_t i) { return RemainderWeight(i, a, j); });
}

Estimate RemainderOracle::ExpectedCost(const ElementSet& a, int j) const {
  return primary_.samples.Average(
      [&](std::size_t i) { return CostWeight(i, a, j); });
}

Estimate RemainderOracle::ExpectedRemainderDrop(const ElementSet& a, Element x,
                                                int j) const {
  const ElementSet ax = a.With(x);
  if (!independent_) {
    return primary_.samples.Average([&](std::size_t i) {
      return RemainderWeight(i, a, j) - RemainderWeight(i, ax, j);
    });
  }
  const Estimate first = primary_.samples.Average(
      [&](std::size_t i) { return RemainderWeightIn(primary_, i, a, j); });
  const Estimate second = independent_->samples.Average(
      [&](std::size_t i) { return RemainderWeightIn(*independent_, i, ax, j); });
  return {first.mean - second.mean,
          std::hypot(first.std_error, second.std_error)};
}

Estimate RemainderOracle::ExpectedCostRise(const ElementSet& a, Element x,
                                           int j) const {
  const ElementSet ax = a.With(x);
  return primary_.samples.Average(
      [&](std::size_t i) { return CostWeight(i, ax, j) - CostWeight(i, a, j); });
}

Estimate RemainderOracle::ExpectedOptimum() const {
  return primary_.samples.Average(
      [&](std::size_t i) { return primary_.base_weights[i]; });
}

Estimate ExpectedRemainderWeight(const MatroidPtr& m,
                                 const WeightProfile& profile,
                                 const ElementSet& a,
                                 const Estimator& estimator) {
  if (!m->IsIndependent(a)) throw InputError("A must be independent");
  const SampleBank bank = SampleBank::Build(profile, estimator);
  return bank.Average([&](std::size_t i) {
    return SetWeight(Remainder(m, bank[i].weights, a).remainder,
                     bank[i].weights);
  });
}

Estimate ExpectedRemainderWeightJ(const std::vector<MatroidPtr>& matroids,
                                  const WeightProfile& profile,
                                  const ElementSet& a, int j,
                                  const Estimator& estimator) {
  RemainderOracle oracle(matroids, SampleBank::Build(profile, estimator));
  if (!FeasibleInAll(matroids, a)) throw InputError("A must be feasible");
  if (j < 0 || j >= oracle.num_matroids()) {
    throw InputError("matroid index out of range");
  }
  return oracle.ExpectedRemainder(a, j);
}

}  // namespace prophet
