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

#ifndef PROPHET_INSTANCE_H_
#define PROPHET_INSTANCE_H_

#include <optional>
#include <string>
#include <vector>

#include "prophet/element_set.h"
#include "prophet/matroid.h"
#include "prophet/random.h"
#include "prophet/weights.h"

namespace prophet {

// One online selection problem: constraints over a shared ground set and
// independent per-element weight distributions.
struct Instance {
  std::string name;
  std::vector<MatroidPtr> matroids;
  WeightProfile profile;
  std::vector<std::string> labels;

  int size() const { return profile.size(); }
  int num_matroids() const { return static_cast<int>(matroids.size()); }
  // Throws InputError when the constraints and profile disagree on n.
  void Validate() const;
};

bool IsPrime(int q);

// 1-uniform matroid on two elements; element 0 has weight 1, element 1 has
// weight n with probability 1/n and 0 otherwise.
Instance GenRankOneTight(int n);

// Ground set {(i, j) : 0 <= i < q^q, 0 <= j < q}, element id i * q + j,
// weights 1 with probability 1/q. Constraint x in Z_q is the partition
// matroid with blocks S_j = {(i, (x i + j) mod q)} and capacity 1. Requires a
// prime q <= 3.
Instance GenIntersectionTight(int q);

// Exhaustive comparison (n <= 20) of the instance's feasible family with the
// family of sets whose elements share one first coordinate (id / q). Returns
// the first set, in increasing bitmask order, on which the two disagree.
std::optional<ElementSet> GroupFamilyMismatch(const Instance& instance, int q);

// uniform(2, 3) with point masses 3, 2, 1.
Instance UniformExample();

// Triangle graph, edges (0,1), (1,2), (0,2), Bernoulli-style weights.
Instance TriangleInstance();

// Rank-one instance with n <= max_n elements and finite weights of support
// <= max_support. Values are small integers and probabilities multiples of
// 1/8, so every expectation over the outcome table is exact in binary
// floating point.
Instance RandomRankOneInstance(RandomStream& stream, int max_n = 6,
                               int max_support = 3);

// Random finite-discrete profile: distinct integer values in [0, max_value],
// support sizes in [min_support, max_support], probabilities multiples of 1/8.
WeightProfile RandomDyadicProfile(RandomStream& stream, int n, int max_support,
                                  int max_value, int min_support = 1);

// Uniform, partition and graphic matroids with n <= 8 and dyadic weights.
std::vector<Instance> MatroidCorpus(std::uint64_t seed);

// Two random partition matroids (or a partition and a uniform matroid) on
// n <= 8 elements with dyadic weights.
Instance RandomIntersectionInstance(RandomStream& stream);

}  // namespace prophet

#endif  // PROPHET_INSTANCE_H_
