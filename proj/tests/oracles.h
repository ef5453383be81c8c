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

// Independent brute-force references for the unit and acceptance tests.

#ifndef PROPHET_TESTS_ORACLES_H_
#define PROPHET_TESTS_ORACLES_H_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "prophet/element_set.h"
#include "prophet/matroid.h"

namespace prophet::testing {

// Union-find acyclicity: an edge set of a multigraph is independent iff it
// has no cycle (self-loops are cycles).
inline bool ForestOracle(int vertices,
                         const std::vector<std::pair<int, int>>& edges,
                         std::uint64_t mask) {
  std::vector<int> parent(vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!(mask >> e & 1)) continue;
    const int a = find(edges[e].first);
    const int b = find(edges[e].second);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

// Largest independent subset of `mask`, by exhaustive search.
template <typename Indep>
int BruteRank(std::uint64_t mask, Indep indep) {
  int best = 0;
  for (std::uint64_t s = mask;; s = (s - 1) & mask) {
    if (indep(s)) best = std::max(best, std::popcount(s));
    if (s == 0) break;
  }
  return best;
}

// Maximum weight over all sets accepted by `indep` within n elements.
template <typename Indep>
double BruteMaxWeight(int n, std::span<const double> w, Indep indep) {
  double best = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (!indep(s)) continue;
    double total = 0;
    for (int x = 0; x < n; ++x) {
      if (s >> x & 1) total += w[x];
    }
    best = std::max(best, total);
  }
  return best;
}

inline std::uint64_t MaskOf(const ElementSet& s) { return s.Mask(); }

}  // namespace prophet::testing

#endif  // PROPHET_TESTS_ORACLES_H_
