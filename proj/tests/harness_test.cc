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
#include <functional>

#include "doctest.h"
#include "oracles.h"
#include "prophet/errors.h"
#include "prophet/harness.h"
#include "prophet/instance.h"
#include "prophet/policy.h"

namespace prophet {
namespace {

// Adaptive adversary by plain recursion over every reveal sequence (no
// memoization). The adversary sees past weights but not future ones.
double GameTreeValue(const Instance& inst, const ThresholdPolicy& policy,
                     const ElementSet& revealed, const ElementSet& accepted,
                     bool minimize) {
  const int n = inst.size();
  if (revealed.Size() == n) return 0;
  double best = minimize ? INFINITY : 0;
  double total = 0;
  int count = 0;
  for (Element x = 0; x < n; ++x) {
    if (revealed.Contains(x)) continue;
    const double t = policy.Threshold(accepted, x);
    const WeightDistribution& d = inst.profile.at(x);
    double value = 0;
    for (std::size_t k = 0; k < d.values().size(); ++k) {
      const double w = d.values()[k];
      const bool take = w >= t;
      value += d.probs()[k] *
               ((take ? w : 0) +
                GameTreeValue(inst, policy, revealed.With(x),
                              take ? accepted.With(x) : accepted, minimize));
    }
    best = std::min(best, value);
    total += value;
    ++count;
  }
  return minimize ? best : total / count;
}

double BruteProphet(const Instance& inst) {
  double total = 0;
  for (const Outcome& o : EnumerateOutcomes(inst.profile)) {
    total += o.probability *
             testing::BruteMaxWeight(inst.size(), o.weights, [&](std::uint64_t s) {
               return FeasibleInAll(inst.matroids, ElementSet::FromMask(s));
             });
  }
  return total;
}

SimulationOptions ExactOptions() {
  SimulationOptions options;
  options.workers = 1;
  return options;
}

TEST_SUITE("harness") {

TEST_CASE("rank-one tight generator") {
  const Instance two = GenRankOneTight(2);
  REQUIRE(two.size() == 2);
  CHECK(two.labels == std::vector<std::string>{"elem1", "elem2"});
  CHECK(two.profile.at(1).values() == std::vector<double>{0, 2});
  CHECK(two.profile.at(1).probs() == std::vector<double>{0.5, 0.5});
  for (int n : {2, 5, 10}) {
    const Instance inst = GenRankOneTight(n);
    CHECK(ProphetValue(inst, Estimator::Exact()).mean == 2 - 1.0 / n);
    CHECK(BruteProphet(inst) == 2 - 1.0 / n);
  }
  CHECK(ProphetValue(GenRankOneTight(10), Estimator::Exact()).mean == 1.9);
  CHECK_THROWS_AS(GenRankOneTight(1), InputError);
}

TEST_CASE("intersection tight generator") {
  const Instance ix = GenIntersectionTight(2);
  CHECK(ix.size() == 8);
  CHECK(ix.num_matroids() == 2);
  for (const MatroidPtr& m : ix.matroids) {
    const auto& blocks = dynamic_cast<const PartitionMatroid&>(*m).blocks();
    CHECK(blocks.size() == 2);
    for (const auto& b : blocks) CHECK(b.size() == 4);
  }
  // Every same-group set is feasible.
  for (int i = 0; i < 4; ++i) {
    CHECK(FeasibleInAll(ix.matroids, {2 * i, 2 * i + 1}));
  }
  // (0,1) and (2,0) share no block in either matroid, since 0 and 2 agree
  // mod 2. The intersection is larger than the same-group family.
  const std::optional<ElementSet> extra = GroupFamilyMismatch(ix, 2);
  REQUIRE(extra.has_value());
  CHECK(*extra == ElementSet{1, 4});
  CHECK(FeasibleInAll(ix.matroids, *extra));

  const Instance big = GenIntersectionTight(3);
  CHECK(big.size() == 81);
  CHECK(big.num_matroids() == 3);
  CHECK_THROWS_AS(GenIntersectionTight(4), InputError);
  CHECK_THROWS_AS(GenIntersectionTight(5), RefusedError);
}

TEST_CASE("prophet value") {
  const Instance points = UniformExample();
  CHECK(ProphetValue(points, Estimator::Exact()).mean == 5);
  const Instance ix = GenIntersectionTight(2);
  const double value = ProphetValue(ix, Estimator::Exact()).mean;
  CHECK(value == BruteProphet(ix));
  CHECK(value > 2 * (1 - std::pow(0.75, 4)));
  CHECK(BruteProphet(TriangleInstance()) ==
        ProphetValue(TriangleInstance(), Estimator::Exact()).mean);
}

TEST_CASE("exact simulation values") {
  const Instance r5 = GenRankOneTight(5);
  const PolicyPtr half = MakeRankOneHalfMaxPolicy(r5.matroids, r5.profile);
  const SimulationReport rep =
      Simulate(r5, *half, Adversary::Fixed({0, 1}), ExactOptions());
  CHECK(rep.exact);
  CHECK(rep.gambler.mean == 1);
  CHECK(rep.prophet.mean == 1.8);
  CHECK(rep.ratio >= 0.5);
  CHECK(SimulationCsvRow(rep) ==
        "rank_one_tight_n5,rank_one_half_max,fixed,2,1,0,1.8,0,"
        "0.5555555555555556");

  const Instance points = UniformExample();
  const auto balanced = MakeMatroidBalancedPolicy(
      points.matroids[0], points.profile, Estimator::Exact());
  CHECK(Simulate(points, *balanced, Adversary::Fixed(), ExactOptions())
            .gambler.mean == 5);
  // Reversed, the weight-1 element meets T = (5 - 3) / 2 = 1 and blocks the
  // weight-3 element.
  CHECK(Simulate(points, *balanced, Adversary::Fixed({2, 1, 0}), ExactOptions())
            .gambler.mean == 3);
  for (const Adversary& adv : {Adversary::UniformRandom(),
                               Adversary::GreedyAdaptive(), Adversary::WorstCase()}) {
    const SimulationReport r = Simulate(points, *balanced, adv, ExactOptions());
    CHECK(r.gambler.mean >= 2.5);
    CHECK(r.prophet.mean == 5);
  }

  const Instance ix = GenIntersectionTight(2);
  const auto ixp = MakeIntersectionBalancedPolicy(ix.matroids, ix.profile, 4,
                                                  Estimator::Exact());
  const SimulationReport ixr =
      Simulate(ix, *ixp, Adversary::Fixed(), ExactOptions());
  CHECK(ixr.ratio >= 1.0 / 6);
  CHECK(ixr.gambler.mean < 2);
}

TEST_CASE("worst case matches the game tree") {
  const Instance r2 = GenRankOneTight(2);
  const PolicyPtr half = MakeRankOneHalfMaxPolicy(r2.matroids, r2.profile);
  CHECK(WorstCaseAdaptiveValue(r2, *half) == 1);

  const Instance single{"single",
                        {MakeUniform(1, 1)},
                        WeightProfile({WeightDistribution::FiniteDiscrete(
                            {0, 4}, {0.5, 0.5})}),
                        {}};
  const auto sp = MakeMatroidBalancedPolicy(single.matroids[0], single.profile,
                                            Estimator::Exact());
  CHECK(WorstCaseAdaptiveValue(single, *sp) == RandomOrderValue(single, *sp));

  const Instance k3 = TriangleInstance();
  const auto kp = MakeMatroidBalancedPolicy(k3.matroids[0], k3.profile,
                                            Estimator::Exact());
  const double worst = WorstCaseAdaptiveValue(k3, *kp);
  CHECK(worst == GameTreeValue(k3, *kp, {}, {}, true));
  CHECK(worst >= 0.5 * ProphetValue(k3, Estimator::Exact()).mean);
  CHECK(RandomOrderValue(k3, *kp) == GameTreeValue(k3, *kp, {}, {}, false));

  for (const Instance& inst : MatroidCorpus(2)) {
    if (inst.size() > 6) continue;
    const auto policy = MakeMatroidBalancedPolicy(inst.matroids[0], inst.profile,
                                                  Estimator::Exact());
    CAPTURE(inst.name);
    CHECK(WorstCaseAdaptiveValue(inst, *policy) ==
          doctest::Approx(GameTreeValue(inst, *policy, {}, {}, true)).epsilon(1e-12));
    CHECK(RandomOrderValue(inst, *policy) ==
          doctest::Approx(GameTreeValue(inst, *policy, {}, {}, false)).epsilon(1e-12));
  }
}

TEST_CASE("worst case refuses continuous weights") {
  Instance inst = GenRankOneTight(2);
  inst.profile = WeightProfile({WeightDistribution::UniformInterval(0, 1),
                                WeightDistribution::UniformInterval(0, 1)});
  const PolicyPtr p = MakeSamuelCahnPolicy(inst.matroids, inst.profile);
  CHECK_THROWS_AS(WorstCaseAdaptiveValue(inst, *p), RefusedError);
}

TEST_CASE("acceptance moments") {
  const WeightDistribution u = WeightDistribution::UniformInterval(0, 2);
  const AcceptanceMoments m = AcceptanceAt(u, 0.5);
  CHECK(m.probability == doctest::Approx(0.75));
  // Integral of v/2 over [0.5, 2].
  CHECK(m.payoff == doctest::Approx((4 - 0.25) / 4));
  const WeightDistribution e = WeightDistribution::Exponential(2);
  const AcceptanceMoments em = AcceptanceAt(e, 1);
  CHECK(em.probability == doctest::Approx(std::exp(-2.0)));
  CHECK(em.payoff == doctest::Approx((1 + 0.5) * std::exp(-2.0)));
  const WeightDistribution d = WeightDistribution::FiniteDiscrete({0, 1, 3}, {0.25, 0.25, 0.5});
  const AcceptanceMoments dm = AcceptanceAt(d, 1);
  CHECK(dm.probability == 0.75);
  CHECK(dm.payoff == 1.75);
}

TEST_CASE("monte carlo is reproducible across worker counts") {
  const Instance k3 = TriangleInstance();
  const auto policy = MakeMatroidBalancedPolicy(k3.matroids[0], k3.profile,
                                                Estimator::Exact());
  SimulationOptions one;
  one.estimator = Estimator::MonteCarlo(5000, 77);
  one.workers = 1;
  SimulationOptions three = one;
  three.workers = 3;
  for (const Adversary& adv : {Adversary::UniformRandom(), Adversary::WorstCase()}) {
    const SimulationReport a = Simulate(k3, *policy, adv, one);
    const SimulationReport b = Simulate(k3, *policy, adv, three);
    CHECK(SimulationCsvRow(a) == SimulationCsvRow(b));
    CHECK_FALSE(a.exact);
    const double exact = adv.kind == Adversary::Kind::kWorstCase
                             ? WorstCaseAdaptiveValue(k3, *policy)
                             : RandomOrderValue(k3, *policy);
    CHECK(std::abs(a.gambler.mean - exact) < 4 * a.gambler.std_error + 1e-12);
  }
}

TEST_CASE("number formatting") {
  CHECK(FormatNumber(1.0) == "1");
  CHECK(FormatNumber(0.1) == "0.1");
  CHECK(FormatNumber(INFINITY) == "inf");
}

}  // TEST_SUITE

}  // namespace
}  // namespace prophet
