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

#include <cmath>

#include "doctest.h"
#include "oracles.h"
#include "prophet/errors.h"
#include "prophet/instance.h"
#include "prophet/remainder.h"

namespace prophet {
namespace {

// max w(R) over R within b \ a with a + R independent in m, by enumeration.
double BruteRemainderWeight(const Matroid& m, std::span<const double> w,
                            const ElementSet& a, const ElementSet& b) {
  const std::uint64_t free = b.Minus(a).Mask();
  double best = 0;
  for (std::uint64_t s = free;; s = (s - 1) & free) {
    const ElementSet r = ElementSet::FromMask(s);
    if (m.IsIndependent(a.Union(r))) best = std::max(best, SetWeight(r, w));
    if (s == 0) break;
  }
  return best;
}

TEST_SUITE("remainder") {

TEST_CASE("single matroid examples") {
  const MatroidPtr u = MakeUniform(3, 2);
  const std::vector<double> w = {3, 2, 1};
  const RemainderResult empty = Remainder(u, w, {});
  CHECK(empty.remainder == ElementSet{0, 1});
  CHECK(empty.cost.Empty());
  CHECK(empty.base == ElementSet{0, 1});

  const RemainderResult one = Remainder(u, w, {0});
  CHECK(one.remainder == ElementSet{1});
  CHECK(one.cost == ElementSet{0});

  const RemainderResult full = Remainder(u, w, {1, 2});
  CHECK(full.remainder.Empty());
  CHECK(full.cost == full.base);

  CHECK_THROWS_AS(Remainder(u, w, {0, 1, 2}), InputError);
}

TEST_CASE("remainder is a max-weight basis of the contraction") {
  RandomStream stream(21);
  for (const Instance& inst : MatroidCorpus(3)) {
    const MatroidPtr& m = inst.matroids[0];
    const int n = inst.size();
    for (int round = 0; round < 20; ++round) {
      const WeightVector w = inst.profile.Sample(stream);
      const ElementSet b = MaxWeightBasis(*m, w);
      // A random independent set grown greedily from a shuffled order.
      std::vector<Element> order(n);
      for (int x = 0; x < n; ++x) order[x] = x;
      stream.Shuffle(order);
      ElementSet a;
      const int target = static_cast<int>(stream.UniformInt(n + 1));
      for (Element x : order) {
        if (a.Size() < target && m->IsIndependent(a.With(x))) a.Insert(x);
      }
      const RemainderResult r = Remainder(m, w, a);
      CAPTURE(inst.name);
      CHECK(r.remainder.Union(r.cost) == b);
      CHECK(r.remainder.Disjoint(r.cost));
      CHECK(m->IsIndependent(a.Union(r.remainder)));
      CHECK(SetWeight(r.remainder, w) == BruteRemainderWeight(*m, w, a, b));
    }
  }
}

TEST_CASE("intersection remainders") {
  const Instance ix = GenIntersectionTight(2);
  std::vector<double> w(8, 0);
  w[2] = w[3] = 1;
  w[4] = 1;
  const ElementSet best = MaxWeightFeasibleIntersection(ix.matroids, w);
  CHECK(SetWeight(best, w) == 2);

  const IntersectionRemainder none = RemainderAll(ix.matroids, w, {});
  for (const auto& [r, c] : none.per_matroid) {
    CHECK(r == none.base);
    CHECK(c.Empty());
  }

  // One accepted element.
  const ElementSet a = {4};
  REQUIRE(FeasibleInAll(ix.matroids, a));
  const IntersectionRemainder ra = RemainderAll(ix.matroids, w, a);
  for (int j = 0; j < 2; ++j) {
    const auto& [r, c] = ra.per_matroid[j];
    CAPTURE(j);
    CHECK(r.Union(c) == ra.base);
    CHECK(ix.matroids[j]->IsIndependent(a.Union(r)));
    CHECK(SetWeight(r, w) ==
          BruteRemainderWeight(*ix.matroids[j], w, a, ra.base));
  }
  CHECK(ra.remainder ==
        ra.per_matroid[0].first.Intersect(ra.per_matroid[1].first));
  CHECK(ra.cost == ra.per_matroid[0].second.Union(ra.per_matroid[1].second));
}

TEST_CASE("single-constraint intersection degenerates") {
  const Instance inst = UniformExample();
  const std::vector<double> w = {3, 2, 1};
  const auto [r, c] = RemainderJ(inst.matroids, w, {0}, 0);
  const RemainderResult single = Remainder(inst.matroids[0], w, {0});
  CHECK(r == single.remainder);
  CHECK(c == single.cost);
}

TEST_CASE("max weight feasible intersection") {
  const Instance triangle = TriangleInstance();
  const std::vector<double> w = {2, 3, 4};
  CHECK(SetWeight(MaxWeightFeasibleIntersection(triangle.matroids, w), w) ==
        SetWeight(MaxWeightBasis(*triangle.matroids[0], w), w));
  const std::vector<double> zeros(8, 0);
  CHECK(MaxWeightFeasibleIntersection(GenIntersectionTight(2).matroids, zeros)
            .Empty());
}

TEST_CASE("intersection optimum matches enumeration") {
  RandomStream stream(5);
  for (int round = 0; round < 25; ++round) {
    const Instance inst = RandomIntersectionInstance(stream);
    const WeightVector w = inst.profile.Sample(stream);
    const int n = inst.size();
    const double brute = testing::BruteMaxWeight(n, w, [&](std::uint64_t s) {
      return FeasibleInAll(inst.matroids, ElementSet::FromMask(s));
    });
    CHECK(SetWeight(MaxWeightFeasibleIntersection(inst.matroids, w), w) == brute);
  }
}

TEST_CASE("expected remainder weight") {
  const Instance points = UniformExample();
  CHECK(ExpectedRemainderWeight(points.matroids[0], points.profile, {},
                                Estimator::Exact())
            .mean == 5);
  const Instance r1 = GenRankOneTight(2);
  CHECK(ExpectedRemainderWeight(r1.matroids[0], r1.profile, {},
                                Estimator::Exact())
            .mean == 1.5);
  const Estimate mc = ExpectedRemainderWeight(
      r1.matroids[0], r1.profile, {}, Estimator::MonteCarlo(100000, 17));
  CHECK(std::abs(mc.mean - 1.5) < 0.01);
  const WeightProfile continuous({WeightDistribution::UniformInterval(0, 1),
                                  WeightDistribution::UniformInterval(0, 1)});
  CHECK_THROWS(ExpectedRemainderWeight(MakeUniform(2, 1), continuous, {},
                                       Estimator::Exact()));
}

}  // TEST_SUITE

}  // namespace
}  // namespace prophet
