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

#include <map>

#include "doctest.h"
#include "oracles.h"
#include "prophet/errors.h"
#include "prophet/matroid.h"
#include "prophet/random.h"

namespace prophet {
namespace {

using testing::BruteMaxWeight;
using testing::BruteRank;
using testing::ForestOracle;

const std::vector<std::pair<int, int>> kTriangle = {{0, 1}, {1, 2}, {0, 2}};

TEST_SUITE("matroid") {

TEST_CASE("independence") {
  const MatroidPtr u = MakeUniform(3, 2);
  CHECK(u->IsIndependent({0, 1}));
  CHECK_FALSE(u->IsIndependent({0, 1, 2}));
  const MatroidPtr k3 = MakeGraphic(3, kTriangle);
  CHECK_FALSE(k3->IsIndependent({0, 1, 2}));
  CHECK(ForestOracle(3, kTriangle, 0b011));
  CHECK_FALSE(ForestOracle(3, kTriangle, 0b111));
  CHECK_THROWS_AS(u->IsIndependent({5}), InputError);
}

TEST_CASE("rank") {
  const MatroidPtr k3 = MakeGraphic(3, kTriangle);
  CHECK(Rank(*k3, {}) == 0);
  CHECK(Rank(*k3, {0, 1, 2}) == 2);
  CHECK(BruteRank(0b111, [](std::uint64_t s) {
          return ForestOracle(3, kTriangle, s);
        }) == 2);
  const MatroidPtr part = MakePartition(3, {{0, 1}, {2}}, {1, 1});
  CHECK(Rank(*part, {0, 1}) == 1);
}

TEST_CASE("closure") {
  CHECK(Closure(*MakeUniform(4, 2), {0, 1}) == ElementSet{0, 1, 2, 3});
  const MatroidPtr k3 = MakeGraphic(3, kTriangle);
  CHECK(Closure(*k3, {0, 1}) == ElementSet{0, 1, 2});
  // Loops are spanned by the empty set.
  const MatroidPtr loopy = MakeGraphic(2, {{0, 1}, {1, 1}});
  CHECK(Closure(*loopy, {}) == ElementSet{1});
}

TEST_CASE("contraction and deletion") {
  const MatroidPtr k3 = MakeGraphic(3, kTriangle);
  const MatroidPtr c = Contract(k3, {0});
  CHECK_FALSE(c->IsIndependent({1, 2}));
  CHECK(Rank(*c, {1, 2}) == 1);
  CHECK(c->IsIndependent({1}));
  const MatroidPtr d = Delete(k3, {2});
  CHECK(d->IsIndependent({0, 1}));
  CHECK(Rank(*d, {0, 1}) == 2);
  CHECK_THROWS_AS(d->IsIndependent({2}), InputError);
}

TEST_CASE("max weight basis") {
  const std::vector<double> w = {3, 2, 1};
  const MatroidPtr u = MakeUniform(3, 2);
  const ElementSet b = MaxWeightBasis(*u, w);
  CHECK(b == ElementSet{0, 1});
  CHECK(SetWeight(b, w) == 5);
  const std::vector<double> ones = {1, 1, 1};
  CHECK(MaxWeightBasis(*MakeGraphic(3, kTriangle), ones) == ElementSet{0, 1});
  const std::vector<double> zeros = {0, 0, 0};
  const ElementSet z = MaxWeightBasis(*u, zeros);
  CHECK(z.Size() == 2);
  CHECK(SetWeight(z, zeros) == 0);
  const std::vector<double> negative = {1, -1, 0};
  CHECK_THROWS_AS(MaxWeightBasis(*u, negative), InputError);
}

TEST_CASE("greedy matches brute force on random graphs") {
  RandomStream stream(7);
  for (int round = 0; round < 60; ++round) {
    const int vertices = 2 + static_cast<int>(stream.UniformInt(4));
    const int m = 1 + static_cast<int>(stream.UniformInt(8));
    std::vector<std::pair<int, int>> edges;
    std::vector<double> w;
    for (int e = 0; e < m; ++e) {
      edges.emplace_back(stream.UniformInt(vertices), stream.UniformInt(vertices));
      w.push_back(static_cast<double>(stream.UniformInt(10)));
    }
    const MatroidPtr g = MakeGraphic(vertices, edges);
    auto forest = [&](std::uint64_t s) { return ForestOracle(vertices, edges, s); };
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
      REQUIRE(g->IsIndependent(ElementSet::FromMask(s)) == forest(s));
      CHECK(Rank(*g, ElementSet::FromMask(s)) == BruteRank(s, forest));
    }
    const ElementSet basis = MaxWeightBasis(*g, w);
    CHECK(Rank(*g, basis) == Rank(*g, ElementSet::Range(m)));
    CHECK(SetWeight(basis, w) == BruteMaxWeight(m, w, forest));
  }
}

TEST_CASE("exchange bijection") {
  const MatroidPtr k3 = MakeGraphic(3, kTriangle);
  const std::map<Element, Element> expected = {{0, 2}, {1, 1}};
  CHECK(ExchangeBijection(*k3, {0, 1}, {1, 2}) == expected);
  const MatroidPtr u = MakeUniform(3, 1);
  CHECK(ExchangeBijection(*u, {0}, {2}) == std::map<Element, Element>{{0, 2}});
  const std::map<Element, Element> identity = {{0, 0}, {1, 1}};
  CHECK(ExchangeBijection(*k3, {0, 1}, {0, 1}) == identity);
}

TEST_CASE("exchange bijection invariant on random partitions") {
  RandomStream stream(11);
  for (int round = 0; round < 40; ++round) {
    const MatroidPtr m = MakePartition(6, {{0, 1, 2}, {3, 4}, {5}}, {2, 1, 1});
    std::vector<ElementSet> bases;
    for (std::uint64_t s = 0; s < 64; ++s) {
      const ElementSet set = ElementSet::FromMask(s);
      if (set.Size() == 4 && m->IsIndependent(set)) bases.push_back(set);
    }
    const ElementSet& v = bases[stream.UniformInt(bases.size())];
    const ElementSet& r = bases[stream.UniformInt(bases.size())];
    const auto pi = ExchangeBijection(*m, v, r);
    REQUIRE(pi.size() == 4);
    for (const auto& [from, to] : pi) {
      CHECK(m->IsIndependent(r.Without(to).With(from)));
      CHECK(r.Contains(to));
    }
  }
}

TEST_CASE("axiom check") {
  CHECK(AxiomCheck(ExplicitMatroid(2, {{}, {0}, {1}})));
  CHECK_FALSE(AxiomCheck(ExplicitMatroid(3, {{}, {0}, {1}, {0, 1}, {2}})));
  CHECK(AxiomCheck(ExplicitMatroid(1, {{}})));
}

}  // TEST_SUITE

}  // namespace
}  // namespace prophet
