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

#include "doctest.h"
#include "prophet/harness.h"
#include "prophet/instance.h"
#include "prophet/policy.h"
#include "rational_oracle.h"

namespace prophet {
namespace {

using testing::RankOneByEnumeration;
using testing::ToRational;

TEST_SUITE("rank_one_exact") {

TEST_CASE("tight instance in rationals") {
  const testing::RankOneExact r = RankOneByEnumeration(GenRankOneTight(4), {0, 1});
  CHECK(r.expect_max == testing::Rational(7, 4));
  CHECK(r.threshold == testing::Rational(7, 8));
  CHECK(r.gambler == testing::Rational(1));
}

TEST_CASE("half-max rule against the rational oracle") {
  RandomStream stream(101);
  for (int round = 0; round < 30; ++round) {
    const Instance inst = RandomRankOneInstance(stream);
    std::vector<Element> order(inst.size());
    for (int x = 0; x < inst.size(); ++x) order[x] = x;
    const testing::RankOneExact exact = RankOneByEnumeration(inst, order);
    const PolicyPtr policy = MakeRankOneHalfMaxPolicy(inst.matroids, inst.profile);
    SimulationOptions options;
    options.workers = 1;
    const SimulationReport rep =
        Simulate(inst, *policy, Adversary::Fixed(order), options);
    CAPTURE(inst.name);
    CHECK(ToRational(RankOneThreshold(inst.profile)) == exact.threshold);
    CHECK(ToRational(rep.gambler.mean) == exact.gambler);
    CHECK(ToRational(rep.prophet.mean) == exact.expect_max);
    CHECK(exact.gambler * 2 >= exact.expect_max);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace prophet
