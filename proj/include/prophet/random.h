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

#ifndef PROPHET_RANDOM_H_
#define PROPHET_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace prophet {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded stream of random numbers. Substreams are derived from (seed, index)
// by a counter-based split, so trial i always sees the same numbers no matter
// which worker runs it.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : engine_(SplitMix64(seed)), seed_of_engine_(SplitMix64(seed)) {}

  RandomStream Substream(std::uint64_t index) const {
    return RandomStream(SplitMix64(seed_of_engine_ ^ SplitMix64(index + 1)),
                        0);
  }
  static RandomStream ForTrial(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(SplitMix64(SplitMix64(seed) ^ SplitMix64(index + 1)),
                        0);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}, unbiased.
  std::uint64_t UniformInt(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformInt(i)]);
    }
  }

 private:
  RandomStream(std::uint64_t mixed_seed, int)
      : engine_(mixed_seed), seed_of_engine_(mixed_seed) {}

  std::mt19937_64 engine_;
  std::uint64_t seed_of_engine_ = 0;
};

}  // namespace prophet

#endif  // PROPHET_RANDOM_H_
