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

#include "prophet/matroid.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "prophet/errors.h"

namespace prophet {

Matroid::Matroid(int universe_size, ElementSet ground)
    : universe_size_(universe_size), ground_(std::move(ground)) {
  if (universe_size < 0) throw InputError("negative ground set size");
}

void Matroid::CheckSubset(const ElementSet& s) const {
  if (!s.IsSubsetOf(ground_)) {
    throw InputError("set " + s.ToString() + " is not contained in ground set " +
                     ground_.ToString());
  }
}

bool Matroid::IsIndependent(const ElementSet& s) const {
  CheckSubset(s);
  return Independent(s);
}

UniformMatroid::UniformMatroid(int n, int k)
    : Matroid(n, ElementSet::Range(n)), k_(k) {
  if (k < 0) throw InputError("uniform matroid needs k >= 0");
}

PartitionMatroid::PartitionMatroid(int n,
                                   std::vector<std::vector<Element>> blocks,
                                   std::vector<int> capacities)
    : Matroid(n, ElementSet::Range(n)),
      blocks_(std::move(blocks)),
      capacities_(std::move(capacities)),
      block_of_(n, -1) {
  if (blocks_.size() != capacities_.size()) {
    throw InputError("partition matroid: one capacity per block required");
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (capacities_[b] < 0) throw InputError("negative block capacity");
    for (Element x : blocks_[b]) {
      if (x < 0 || x >= n) throw InputError("partition block element out of range");
      if (block_of_[x] != -1) {
        throw InputError("element " + std::to_string(x) + " in two blocks");
      }
      block_of_[x] = static_cast<int>(b);
    }
  }
  for (Element x = 0; x < n; ++x) {
    if (block_of_[x] == -1) {
      throw InputError("element " + std::to_string(x) + " in no block");
    }
  }
}

bool PartitionMatroid::Independent(const ElementSet& s) const {
  std::vector<int> used(blocks_.size(), 0);
  bool ok = true;
  s.ForEach([&](Element x) {
    const int b = block_of_[x];
    if (++used[b] > capacities_[b]) ok = false;
  });
  return ok;
}

GraphicMatroid::GraphicMatroid(int num_vertices,
                               std::vector<std::pair<int, int>> edges)
    : Matroid(static_cast<int>(edges.size()),
              ElementSet::Range(static_cast<int>(edges.size()))),
      num_vertices_(num_vertices),
      edges_(std::move(edges)) {
  for (const auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices) {
      throw InputError("graphic matroid edge endpoint out of range");
    }
  }
}

bool GraphicMatroid::Independent(const ElementSet& s) const {
  std::vector<int> parent(num_vertices_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  bool acyclic = true;
  s.ForEach([&](Element e) {
    if (!acyclic) return;
    const int a = find(edges_[e].first);
    const int b = find(edges_[e].second);
    if (a == b) {
      acyclic = false;
    } else {
      parent[a] = b;
    }
  });
  return acyclic;
}

ExplicitMatroid::ExplicitMatroid(int n,
                                 const std::vector<ElementSet>& independent_sets)
    : Matroid(n, ElementSet::Range(n)) {
  const ElementSet all = ElementSet::Range(n);
  for (const ElementSet& s : independent_sets) {
    if (!s.IsSubsetOf(all)) throw InputError("explicit set outside ground set");
    if (lookup_.insert(s).second) sets_.push_back(s);
  }
}

namespace {

ElementSet GreedyIndependentSubset(const Matroid& m, const ElementSet& s) {
  ElementSet kept;
  s.ForEach([&](Element x) {
    ElementSet candidate = kept.With(x);
    if (m.IsIndependent(candidate)) kept = std::move(candidate);
  });
  return kept;
}

}  // namespace

ContractionMatroid::ContractionMatroid(MatroidPtr base,
                                       const ElementSet& contracted)
    : Matroid(base->universe_size(), base->ground().Minus(contracted)),
      base_(std::move(base)) {
  base_->CheckSubset(contracted);
  s0_ = GreedyIndependentSubset(*base_, contracted);
}

DeletionMatroid::DeletionMatroid(MatroidPtr base, const ElementSet& deleted)
    : Matroid(base->universe_size(), base->ground().Minus(deleted)),
      base_(std::move(base)) {
  base_->CheckSubset(deleted);
}

MatroidPtr MakeUniform(int n, int k) {
  return std::make_shared<UniformMatroid>(n, k);
}

MatroidPtr MakePartition(int n, std::vector<std::vector<Element>> blocks,
                         std::vector<int> capacities) {
  return std::make_shared<PartitionMatroid>(n, std::move(blocks),
                                            std::move(capacities));
}

MatroidPtr MakeGraphic(int num_vertices,
                       std::vector<std::pair<int, int>> edges) {
  return std::make_shared<GraphicMatroid>(num_vertices, std::move(edges));
}

MatroidPtr MakeExplicit(int n, const std::vector<ElementSet>& sets) {
  return std::make_shared<ExplicitMatroid>(n, sets);
}

MatroidPtr Contract(const MatroidPtr& m, const ElementSet& s) {
  if (s.Empty()) return m;
  return std::make_shared<ContractionMatroid>(m, s);
}

MatroidPtr Delete(const MatroidPtr& m, const ElementSet& s) {
  if (s.Empty()) return m;
  return std::make_shared<DeletionMatroid>(m, s);
}

int Rank(const Matroid& m, const ElementSet& s) {
  m.CheckSubset(s);
  return GreedyIndependentSubset(m, s).Size();
}

ElementSet Closure(const Matroid& m, const ElementSet& s) {
  const int r = Rank(m, s);
  ElementSet closure;
  m.ground().ForEach([&](Element x) {
    if (s.Contains(x) || Rank(m, s.With(x)) == r) closure.Insert(x);
  });
  return closure;
}

std::vector<Element> WeightOrder(const Matroid& m, std::span<const double> w) {
  std::vector<Element> order = m.ground().Elements();
  for (Element x : order) {
    if (static_cast<std::size_t>(x) >= w.size()) {
      throw InputError("weight vector shorter than ground set");
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Element a, Element b) { return w[a] > w[b]; });
  return order;
}

ElementSet GreedyBasis(const Matroid& m, std::span<const Element> order) {
  ElementSet basis;
  for (Element x : order) {
    if (!m.ground().Contains(x)) continue;
    ElementSet candidate = basis.With(x);
    if (m.IsIndependent(candidate)) basis = std::move(candidate);
  }
  return basis;
}

ElementSet MaxWeightBasis(const Matroid& m, std::span<const double> w) {
  m.ground().ForEach([&](Element x) {
    if (static_cast<std::size_t>(x) < w.size() && w[x] < 0) {
      throw InputError("negative weight on element " + std::to_string(x));
    }
  });
  const std::vector<Element> order = WeightOrder(m, w);
  return GreedyBasis(m, order);
}

double SetWeight(const ElementSet& s, std::span<const double> w) {
  double total = 0;
  s.ForEach([&](Element x) { total += w[x]; });
  return total;
}

std::map<Element, Element> ExchangeBijection(const Matroid& m,
                                             const ElementSet& v,
                                             const ElementSet& r) {
  if (!m.IsIndependent(v) || !m.IsIndependent(r)) {
    throw InputError("exchange bijection needs independent V and R");
  }
  if (v.Size() != r.Size()) {
    throw InputError("exchange bijection needs |V| = |R|");
  }
  std::map<Element, Element> match_of_v;
  std::map<Element, Element> match_of_r;
  const ElementSet shared = v.Intersect(r);
  shared.ForEach([&](Element x) {
    match_of_v[x] = x;
    match_of_r[x] = x;
  });

  const std::vector<Element> free_v = v.Minus(shared).Elements();
  const std::vector<Element> free_r = r.Minus(shared).Elements();
  std::map<Element, std::vector<Element>> adjacent;
  for (Element x : free_v) {
    for (Element y : free_r) {
      if (m.IsIndependent(r.Without(y).With(x))) adjacent[x].push_back(y);
    }
  }

  // Kuhn's augmenting paths.
  std::function<bool(Element, ElementSet&)> augment = [&](Element x,
                                                          ElementSet& seen) {
    for (Element y : adjacent[x]) {
      if (seen.Contains(y)) continue;
      seen.Insert(y);
      auto it = match_of_r.find(y);
      if (it == match_of_r.end() || augment(it->second, seen)) {
        match_of_r[y] = x;
        match_of_v[x] = y;
        return true;
      }
    }
    return false;
  };
  for (Element x : free_v) {
    ElementSet seen;
    if (!augment(x, seen)) {
      throw std::logic_error(
          "exchange graph has no perfect matching; matroid oracle is "
          "inconsistent");
    }
  }
  return match_of_v;
}

bool AxiomCheck(const ExplicitMatroid& m) {
  if (m.universe_size() > 12) {
    throw RefusedError("axiom check is exhaustive; refusing n > 12");
  }
  const auto& sets = m.sets();
  if (sets.empty()) return false;
  for (const ElementSet& s : sets) {
    bool closed = true;
    s.ForEach([&](Element x) {
      if (!m.IsIndependent(s.Without(x))) closed = false;
    });
    if (!closed) return false;
  }
  for (const ElementSet& small : sets) {
    for (const ElementSet& large : sets) {
      if (small.Size() >= large.Size()) continue;
      bool extended = false;
      large.Minus(small).ForEach([&](Element x) {
        if (!extended && m.IsIndependent(small.With(x))) extended = true;
      });
      if (!extended) return false;
    }
  }
  return true;
}

}  // namespace prophet
