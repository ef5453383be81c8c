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

#ifndef PROPHET_MATROID_H_
#define PROPHET_MATROID_H_

#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prophet/element_set.h"

namespace prophet {

// A finite matroid given by an independence oracle. Element identifiers are
// taken from a universe 0..universe_size()-1; the ground set may be a proper
// subset of that universe (deletion and contraction views keep the base
// matroid's identifiers). Matroids are immutable once built and their oracles
// are safe to query concurrently.
class Matroid {
 public:
  virtual ~Matroid() = default;

  int universe_size() const { return universe_size_; }
  const ElementSet& ground() const { return ground_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Throws InputError if `s` is not contained in the ground set.
  bool IsIndependent(const ElementSet& s) const;
  void CheckSubset(const ElementSet& s) const;

  virtual std::string Family() const = 0;

  // Hook for the element-name labels carried by GroundSet.
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }

 protected:
  Matroid(int universe_size, ElementSet ground);

  // Oracle proper; `s` is already known to lie inside the ground set.
  virtual bool Independent(const ElementSet& s) const = 0;

  friend class ContractionMatroid;
  friend class DeletionMatroid;

 private:
  int universe_size_;
  ElementSet ground_;
  std::vector<std::string> labels_;
};

using MatroidPtr = std::shared_ptr<const Matroid>;

class UniformMatroid : public Matroid {
 public:
  UniformMatroid(int n, int k);
  int k() const { return k_; }
  std::string Family() const override { return "uniform"; }

 protected:
  bool Independent(const ElementSet& s) const override {
    return s.Size() <= k_;
  }

 private:
  int k_;
};

// Every element belongs to exactly one block; a set is independent when it
// meets block b in at most capacities[b] elements.
class PartitionMatroid : public Matroid {
 public:
  PartitionMatroid(int n, std::vector<std::vector<Element>> blocks,
                   std::vector<int> capacities);
  const std::vector<std::vector<Element>>& blocks() const { return blocks_; }
  const std::vector<int>& capacities() const { return capacities_; }
  std::string Family() const override { return "partition"; }

 protected:
  bool Independent(const ElementSet& s) const override;

 private:
  std::vector<std::vector<Element>> blocks_;
  std::vector<int> capacities_;
  std::vector<int> block_of_;
};

// Cycle matroid of a multigraph: element i is edge i, a set is independent
// when its edges form a forest. Self-loops are never independent.
class GraphicMatroid : public Matroid {
 public:
  GraphicMatroid(int num_vertices, std::vector<std::pair<int, int>> edges);
  int num_vertices() const { return num_vertices_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::string Family() const override { return "graphic"; }

 protected:
  bool Independent(const ElementSet& s) const override;

 private:
  int num_vertices_;
  std::vector<std::pair<int, int>> edges_;
};

// Independent sets listed explicitly. The listed family is trusted; use
// AxiomCheck to validate it.
class ExplicitMatroid : public Matroid {
 public:
  ExplicitMatroid(int n, const std::vector<ElementSet>& independent_sets);
  const std::vector<ElementSet>& sets() const { return sets_; }
  std::string Family() const override { return "explicit"; }

 protected:
  bool Independent(const ElementSet& s) const override {
    return lookup_.count(s) > 0;
  }

 private:
  std::vector<ElementSet> sets_;
  std::unordered_set<ElementSet, ElementSetHash> lookup_;
};

// M / S: ground U - S, T independent iff T + S0 is independent in M, where S0
// is the maximal independent subset of S picked greedily in identifier order.
class ContractionMatroid : public Matroid {
 public:
  ContractionMatroid(MatroidPtr base, const ElementSet& contracted);
  const ElementSet& contracted_basis() const { return s0_; }
  std::string Family() const override { return "contraction"; }

 protected:
  bool Independent(const ElementSet& s) const override {
    return base_->Independent(s.Union(s0_));
  }

 private:
  MatroidPtr base_;
  ElementSet s0_;
};

// M - S: ground U - S, same independent sets.
class DeletionMatroid : public Matroid {
 public:
  DeletionMatroid(MatroidPtr base, const ElementSet& deleted);
  std::string Family() const override { return "deletion"; }

 protected:
  bool Independent(const ElementSet& s) const override {
    return base_->Independent(s);
  }

 private:
  MatroidPtr base_;
};

MatroidPtr MakeUniform(int n, int k);
MatroidPtr MakePartition(int n, std::vector<std::vector<Element>> blocks,
                         std::vector<int> capacities);
MatroidPtr MakeGraphic(int num_vertices,
                       std::vector<std::pair<int, int>> edges);
MatroidPtr MakeExplicit(int n, const std::vector<ElementSet>& sets);

MatroidPtr Contract(const MatroidPtr& m, const ElementSet& s);
MatroidPtr Delete(const MatroidPtr& m, const ElementSet& s);

// Size of a maximal independent subset of `s`, built greedily in identifier
// order.
int Rank(const Matroid& m, const ElementSet& s);

// {x in ground : rank(s + x) = rank(s)}.
ElementSet Closure(const Matroid& m, const ElementSet& s);

// Ground elements sorted by descending weight, ascending identifier on ties.
std::vector<Element> WeightOrder(const Matroid& m, std::span<const double> w);

// Greedy basis scanning `order`; elements outside the ground set are skipped.
ElementSet GreedyBasis(const Matroid& m, std::span<const Element> order);

// Maximum-weight basis for non-negative weights indexed by element id.
ElementSet MaxWeightBasis(const Matroid& m, std::span<const double> w);

double SetWeight(const ElementSet& s, std::span<const double> w);

// Bijection phi: V -> R with (R - phi(v)) + v independent for every v. Pairs
// are returned sorted by v. Elements of V that also lie in R are matched to
// themselves.
std::map<Element, Element> ExchangeBijection(const Matroid& m,
                                             const ElementSet& v,
                                             const ElementSet& r);

// Exhaustive axiom check for explicitly listed families (n <= 12).
bool AxiomCheck(const ExplicitMatroid& m);

}  // namespace prophet

#endif  // PROPHET_MATROID_H_
