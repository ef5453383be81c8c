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

// Exact rank-one reference in rational arithmetic.

#ifndef PROPHET_TESTS_RATIONAL_ORACLE_H_
#define PROPHET_TESTS_RATIONAL_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/rational.hpp>

#include "prophet/instance.h"

namespace prophet::testing {

using Rational = boost::rational<long long>;

// Exact value of a dyadic double; throws if it needs more than 2^-40.
inline Rational ToRational(double v) {
  long long den = 1;
  double scaled = v;
  while (scaled != std::floor(scaled)) {
    scaled *= 2;
    den *= 2;
    if (den > (1LL << 40)) throw std::domain_error("value is not dyadic");
  }
  return Rational(static_cast<long long>(scaled), den);
}

struct RankOneExact {
  Rational expect_max;
  Rational threshold;   // E[max] / 2
  Rational gambler;     // accept the first w >= threshold, in the given order
};

// Enumerates the product space itself, independent of the library's
// outcome table.
inline RankOneExact RankOneByEnumeration(const Instance& inst,
                                         const std::vector<Element>& order) {
  const int n = inst.size();
  std::vector<std::vector<Rational>> values(n), probs(n);
  for (int x = 0; x < n; ++x) {
    const WeightDistribution& d = inst.profile.at(x);
    for (std::size_t k = 0; k < d.values().size(); ++k) {
      values[x].push_back(ToRational(d.values()[k]));
      probs[x].push_back(ToRational(d.probs()[k]));
    }
  }
  auto visit = [&](auto&& fn) {
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      Rational p = 1;
      std::vector<Rational> w(n);
      for (int x = 0; x < n; ++x) {
        p *= probs[x][idx[x]];
        w[x] = values[x][idx[x]];
      }
      fn(p, w);
      int x = 0;
      while (x < n && ++idx[x] == values[x].size()) idx[x++] = 0;
      if (x == n) return;
    }
  };
  RankOneExact out;
  visit([&](const Rational& p, const std::vector<Rational>& w) {
    out.expect_max += p * *std::max_element(w.begin(), w.end());
  });
  out.threshold = out.expect_max / 2;
  visit([&](const Rational& p, const std::vector<Rational>& w) {
    for (Element x : order) {
      if (w[x] >= out.threshold) {
        out.gambler += p * w[x];
        break;
      }
    }
  });
  return out;
}

inline double ToDouble(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace prophet::testing

#endif  // PROPHET_TESTS_RATIONAL_ORACLE_H_
