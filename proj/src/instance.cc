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

#include "prophet/instance.h"

#include <algorithm>
#include <numeric>

#include "prophet/errors.h"
#include "prophet/remainder.h"

namespace prophet {

void Instance::Validate() const {
  if (matroids.empty()) throw InputError("instance has no constraints");
  for (const MatroidPtr& m : matroids) {
    if (m->universe_size() != profile.size()) {
      throw InputError("instance " + name +
                       ": constraint and profile sizes differ");
    }
  }
}

bool IsPrime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

Instance GenRankOneTight(int n) {
  if (n < 2) throw InputError("rank-one tight instance needs n >= 2");
  Instance inst;
  inst.name = "rank_one_tight_n" + std::to_string(n);
  inst.matroids = {MakeUniform(2, 1)};
  const double p = 1.0 / n;
  inst.profile = WeightProfile(
      {WeightDistribution::PointMass(1.0),
       WeightDistribution::FiniteDiscrete({0.0, static_cast<double>(n)},
                                          {1.0 - p, p})});
  inst.labels = {"elem1", "elem2"};
  return inst;
}

Instance GenIntersectionTight(int q) {
  if (!IsPrime(q)) throw InputError("q must be prime");
  if (q > 3) throw RefusedError("intersection lower bound supports q <= 3");
  int groups = 1;
  for (int k = 0; k < q; ++k) groups *= q;
  const int n = groups * q;
  Instance inst;
  inst.name = "intersection_tight_q" + std::to_string(q);
  for (int x = 0; x < q; ++x) {
    std::vector<std::vector<Element>> blocks(q);
    for (int i = 0; i < groups; ++i) {
      for (int j = 0; j < q; ++j) {
        // (i, (x i + j) mod q) lies in block S_j.
        const int second = (x * i + j) % q;
        blocks[j].push_back(i * q + second);
      }
    }
    inst.matroids.push_back(MakePartition(n, blocks, std::vector<int>(q, 1)));
  }
  std::vector<WeightDistribution> dists(
      n, WeightDistribution::Bernoulli(1.0, 1.0 / q));
  inst.profile = WeightProfile(std::move(dists));
  for (int i = 0; i < groups; ++i) {
    for (int j = 0; j < q; ++j) {
      inst.labels.push_back("(" + std::to_string(i) + "," + std::to_string(j) +
                            ")");
    }
  }
  return inst;
}

std::optional<ElementSet> GroupFamilyMismatch(const Instance& instance, int q) {
  const int n = instance.size();
  if (n > 20) throw RefusedError("family comparison is exhaustive; n <= 20");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const ElementSet s = ElementSet::FromMask(mask);
    bool one_group = true;
    int group = -1;
    s.ForEach([&](Element x) {
      if (group == -1) group = x / q;
      if (x / q != group) one_group = false;
    });
    if (one_group != FeasibleInAll(instance.matroids, s)) return s;
  }
  return std::nullopt;
}

Instance UniformExample() {
  Instance inst;
  inst.name = "uniform_2_3_point";
  inst.matroids = {MakeUniform(3, 2)};
  inst.profile = WeightProfile({WeightDistribution::PointMass(3),
                                WeightDistribution::PointMass(2),
                                WeightDistribution::PointMass(1)});
  return inst;
}

Instance TriangleInstance() {
  Instance inst;
  inst.name = "triangle";
  inst.matroids = {MakeGraphic(3, {{0, 1}, {1, 2}, {0, 2}})};
  inst.profile = WeightProfile(
      {WeightDistribution::FiniteDiscrete({0, 2}, {0.5, 0.5}),
       WeightDistribution::FiniteDiscrete({1, 3}, {0.5, 0.5}),
       WeightDistribution::FiniteDiscrete({0, 4}, {0.75, 0.25})});
  inst.labels = {"e1", "e2", "e3"};
  return inst;
}

namespace {

// Random composition of 8 into k positive parts, as probabilities.
std::vector<double> DyadicProbs(RandomStream& stream, int k) {
  std::vector<int> cuts;
  std::vector<int> points(7);
  std::iota(points.begin(), points.end(), 1);
  stream.Shuffle(points);
  cuts.assign(points.begin(), points.begin() + (k - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> probs;
  int prev = 0;
  for (int c : cuts) {
    probs.push_back((c - prev) / 8.0);
    prev = c;
  }
  probs.push_back((8 - prev) / 8.0);
  return probs;
}

}  // namespace

WeightProfile RandomDyadicProfile(RandomStream& stream, int n, int max_support,
                                  int max_value, int min_support) {
  std::vector<WeightDistribution> dists;
  for (int x = 0; x < n; ++x) {
    const int k =
        min_support +
        static_cast<int>(stream.UniformInt(max_support - min_support + 1));
    std::vector<int> pool(max_value + 1);
    std::iota(pool.begin(), pool.end(), 0);
    stream.Shuffle(pool);
    std::vector<double> values(pool.begin(), pool.begin() + k);
    dists.push_back(
        WeightDistribution::FiniteDiscrete(values, DyadicProbs(stream, k)));
  }
  return WeightProfile(std::move(dists));
}

Instance RandomRankOneInstance(RandomStream& stream, int max_n,
                               int max_support) {
  const int n = 1 + static_cast<int>(stream.UniformInt(max_n));
  Instance inst;
  inst.name = "random_rank_one_n" + std::to_string(n);
  inst.matroids = {MakeUniform(n, 1)};
  inst.profile = RandomDyadicProfile(stream, n, max_support, 9);
  return inst;
}

std::vector<Instance> MatroidCorpus(std::uint64_t seed) {
  RandomStream stream(seed);
  std::vector<Instance> corpus;
  corpus.push_back(UniformExample());
  corpus.push_back(TriangleInstance());

  auto add = [&](std::string name, MatroidPtr m, int max_support) {
    Instance inst;
    inst.name = std::move(name);
    inst.profile =
        RandomDyadicProfile(stream, m->universe_size(), max_support, 7, 2);
    inst.matroids = {std::move(m)};
    corpus.push_back(std::move(inst));
  };
  add("uniform_2_4", MakeUniform(4, 2), 3);
  add("uniform_3_6", MakeUniform(6, 3), 3);
  add("uniform_1_5", MakeUniform(5, 1), 3);
  add("uniform_4_8", MakeUniform(8, 4), 3);
  add("partition_6", MakePartition(6, {{0, 1, 2}, {3, 4}, {5}}, {1, 1, 1}), 3);
  add("partition_8",
      MakePartition(8, {{0, 1}, {2, 3, 4}, {5, 6, 7}}, {1, 2, 1}), 3);
  add("graphic_k4",
      MakeGraphic(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), 3);
  add("graphic_c4_chord",
      MakeGraphic(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}), 3);
  add("graphic_multigraph",
      MakeGraphic(3, {{0, 1}, {0, 1}, {1, 2}, {2, 2}, {0, 2}, {1, 2}}), 3);
  add("graphic_two_triangles",
      MakeGraphic(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}, {1, 3}}),
      2);
  return corpus;
}

Instance RandomIntersectionInstance(RandomStream& stream) {
  const int n = 4 + static_cast<int>(stream.UniformInt(5));
  auto random_partition = [&]() {
    const int num_blocks = 2 + static_cast<int>(stream.UniformInt(n - 2));
    std::vector<std::vector<Element>> blocks(num_blocks);
    std::vector<Element> elements(n);
    std::iota(elements.begin(), elements.end(), 0);
    stream.Shuffle(elements);
    for (int i = 0; i < n; ++i) {
      // The first num_blocks shuffled elements seed distinct blocks.
      const int b = i < num_blocks ? i : static_cast<int>(stream.UniformInt(num_blocks));
      blocks[b].push_back(elements[i]);
    }
    std::vector<int> caps(num_blocks);
    for (int& c : caps) c = 1 + static_cast<int>(stream.UniformInt(2));
    return MakePartition(n, blocks, caps);
  };
  Instance inst;
  inst.name = "random_intersection_n" + std::to_string(n);
  inst.matroids.push_back(random_partition());
  if (stream.UniformInt(3) == 0) {
    inst.matroids.push_back(MakeUniform(n, 2 + static_cast<int>(stream.UniformInt(2))));
  } else {
    inst.matroids.push_back(random_partition());
  }
  inst.profile = RandomDyadicProfile(stream, n, n <= 6 ? 3 : 2, 7, 2);
  return inst;
}

}  // namespace prophet
