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

#ifndef PROPHET_ELEMENT_SET_H_
#define PROPHET_ELEMENT_SET_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace prophet {

// Ground elements are dense integer identifiers 0..n-1.
using Element = int;

// A finite set of element identifiers stored as a bitset. Iteration is always
// in ascending identifier order, which is the deterministic tie-break used
// throughout the library.
class ElementSet {
 public:
  ElementSet() = default;
  ElementSet(std::initializer_list<Element> elements);
  explicit ElementSet(const std::vector<Element>& elements);

  // {0, 1, ..., n-1}.
  static ElementSet Range(int n);
  static ElementSet FromMask(std::uint64_t mask);

  bool Contains(Element x) const {
    const auto word = static_cast<std::size_t>(x) / 64;
    return x >= 0 && word < words_.size() && ((words_[word] >> (x % 64)) & 1);
  }
  void Insert(Element x);
  void Erase(Element x);

  int Size() const;
  bool Empty() const;
  // Largest identifier plus one, or 0 for the empty set.
  int Bound() const;

  ElementSet With(Element x) const;
  ElementSet Without(Element x) const;
  ElementSet Union(const ElementSet& other) const;
  ElementSet Intersect(const ElementSet& other) const;
  ElementSet Minus(const ElementSet& other) const;
  bool IsSubsetOf(const ElementSet& other) const;
  bool Disjoint(const ElementSet& other) const;

  std::vector<Element> Elements() const;
  // Only valid when Bound() <= 64.
  std::uint64_t Mask() const;

  std::string ToString() const;
  std::size_t Hash() const;

  friend bool operator==(const ElementSet& a, const ElementSet& b);
  // Lexicographic order on the ascending identifier lists.
  friend bool LexLess(const ElementSet& a, const ElementSet& b);

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        fn(static_cast<Element>(w * 64 + bit));
        bits &= bits - 1;
      }
    }
  }

 private:
  void Trim();

  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.Hash(); }
};

}  // namespace prophet

#endif  // PROPHET_ELEMENT_SET_H_
