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

#include "prophet/element_set.h"

#include <algorithm>
#include <sstream>

namespace prophet {

ElementSet::ElementSet(std::initializer_list<Element> elements) {
  for (Element x : elements) Insert(x);
}

ElementSet::ElementSet(const std::vector<Element>& elements) {
  for (Element x : elements) Insert(x);
}

ElementSet ElementSet::Range(int n) {
  ElementSet s;
  for (Element x = 0; x < n; ++x) s.Insert(x);
  return s;
}

ElementSet ElementSet::FromMask(std::uint64_t mask) {
  ElementSet s;
  if (mask != 0) s.words_.push_back(mask);
  return s;
}

void ElementSet::Insert(Element x) {
  const auto word = static_cast<std::size_t>(x) / 64;
  if (word >= words_.size()) words_.resize(word + 1, 0);
  words_[word] |= std::uint64_t{1} << (x % 64);
}

void ElementSet::Erase(Element x) {
  const auto word = static_cast<std::size_t>(x) / 64;
  if (x < 0 || word >= words_.size()) return;
  words_[word] &= ~(std::uint64_t{1} << (x % 64));
  Trim();
}

int ElementSet::Size() const {
  int n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool ElementSet::Empty() const { return words_.empty(); }

int ElementSet::Bound() const {
  if (words_.empty()) return 0;
  const std::uint64_t top = words_.back();
  return static_cast<int>((words_.size() - 1) * 64 + 64 - std::countl_zero(top));
}

ElementSet ElementSet::With(Element x) const {
  ElementSet s = *this;
  s.Insert(x);
  return s;
}

ElementSet ElementSet::Without(Element x) const {
  ElementSet s = *this;
  s.Erase(x);
  return s;
}

ElementSet ElementSet::Union(const ElementSet& other) const {
  ElementSet s;
  s.words_.resize(std::max(words_.size(), other.words_.size()), 0);
  for (std::size_t i = 0; i < s.words_.size(); ++i) {
    if (i < words_.size()) s.words_[i] |= words_[i];
    if (i < other.words_.size()) s.words_[i] |= other.words_[i];
  }
  return s;
}

ElementSet ElementSet::Intersect(const ElementSet& other) const {
  ElementSet s;
  s.words_.resize(std::min(words_.size(), other.words_.size()), 0);
  for (std::size_t i = 0; i < s.words_.size(); ++i) {
    s.words_[i] = words_[i] & other.words_[i];
  }
  s.Trim();
  return s;
}

ElementSet ElementSet::Minus(const ElementSet& other) const {
  ElementSet s = *this;
  for (std::size_t i = 0; i < std::min(s.words_.size(), other.words_.size());
       ++i) {
    s.words_[i] &= ~other.words_[i];
  }
  s.Trim();
  return s;
}

bool ElementSet::IsSubsetOf(const ElementSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const std::uint64_t o = i < other.words_.size() ? other.words_[i] : 0;
    if ((words_[i] & ~o) != 0) return false;
  }
  return true;
}

bool ElementSet::Disjoint(const ElementSet& other) const {
  for (std::size_t i = 0; i < std::min(words_.size(), other.words_.size());
       ++i) {
    if ((words_[i] & other.words_[i]) != 0) return false;
  }
  return true;
}

std::vector<Element> ElementSet::Elements() const {
  std::vector<Element> out;
  out.reserve(Size());
  ForEach([&](Element x) { out.push_back(x); });
  return out;
}

std::uint64_t ElementSet::Mask() const {
  return words_.empty() ? 0 : words_[0];
}

std::string ElementSet::ToString() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  ForEach([&](Element x) {
    if (!first) os << ',';
    os << x;
    first = false;
  });
  os << '}';
  return os.str();
}

std::size_t ElementSet::Hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (std::uint64_t w : words_) {
    h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
  }
  return h;
}

bool operator==(const ElementSet& a, const ElementSet& b) {
  return a.words_ == b.words_;
}

bool LexLess(const ElementSet& a, const ElementSet& b) {
  const std::vector<Element> ea = a.Elements();
  const std::vector<Element> eb = b.Elements();
  return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(),
                                      eb.end());
}

void ElementSet::Trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

}  // namespace prophet
