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

#ifndef PROPHET_WEIGHTS_H_
#define PROPHET_WEIGHTS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "prophet/random.h"

namespace prophet {

// Distribution of one element's weight. Supports are subsets of R+.
class WeightDistribution {
 public:
  enum class Kind { kPointMass, kFiniteDiscrete, kUniformInterval, kExponential };

  static WeightDistribution PointMass(double value);
  // Values are sorted ascending and duplicates merged; zero-probability atoms
  // are dropped.
  static WeightDistribution FiniteDiscrete(std::vector<double> values,
                                           std::vector<double> probs);
  // {0: 1-p, value: p}.
  static WeightDistribution Bernoulli(double value, double p);
  static WeightDistribution UniformInterval(double a, double b);
  static WeightDistribution Exponential(double rate);

  Kind kind() const { return kind_; }
  bool IsFinite() const {
    return kind_ == Kind::kPointMass || kind_ == Kind::kFiniteDiscrete;
  }
  bool IsContinuous() const { return !IsFinite(); }

  // Atoms of a finite distribution, values ascending.
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double rate() const { return rate_; }

  double Cdf(double v) const;
  // Density; only defined for continuous kinds.
  double Pdf(double v) const;
  double Quantile(double u) const;
  double Mean() const;
  double SupportMin() const;
  // +infinity for the exponential.
  double SupportMax() const;

  double Sample(RandomStream& stream) const { return Quantile(stream.Uniform01()); }

  std::string ToString() const;

 private:
  WeightDistribution() = default;

  Kind kind_ = Kind::kPointMass;
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
  double a_ = 0;
  double b_ = 0;
  double rate_ = 1;
};

using WeightVector = std::vector<double>;

// Independent per-element weight distributions; entry x is F_x.
class WeightProfile {
 public:
  WeightProfile() = default;
  explicit WeightProfile(std::vector<WeightDistribution> distributions);

  int size() const { return static_cast<int>(distributions_.size()); }
  const WeightDistribution& at(int x) const { return distributions_.at(x); }
  const std::vector<WeightDistribution>& distributions() const {
    return distributions_;
  }
  bool AllFinite() const;

  WeightVector Sample(RandomStream& stream) const;

 private:
  std::vector<WeightDistribution> distributions_;
};

struct Outcome {
  WeightVector weights;
  double probability;
};

using OutcomeTable = std::vector<Outcome>;

inline constexpr std::size_t kMaxOutcomes = 1'000'000;

// Full product space of a profile whose distributions are all finite. Throws
// RefusedError for continuous profiles or when the product exceeds `cap`.
OutcomeTable EnumerateOutcomes(const WeightProfile& profile,
                               std::size_t cap = kMaxOutcomes);
std::size_t OutcomeCount(const WeightProfile& profile);

struct Estimate {
  double mean = 0;
  double std_error = 0;
};

struct Estimator {
  enum class Mode { kExact, kMonteCarlo };
  Mode mode = Mode::kExact;
  int trials = 1;
  std::uint64_t seed = 0;
  bool common_random_numbers = true;

  static Estimator Exact() { return {}; }
  static Estimator MonteCarlo(int trials, std::uint64_t seed,
                              bool common_random_numbers = true) {
    return {Mode::kMonteCarlo, trials, seed, common_random_numbers};
  }
  bool exact() const { return mode == Mode::kExact; }
};

// A set of weight assignments w' with probabilities: the full outcome table
// in exact mode, equally weighted Monte Carlo draws otherwise. Every
// expectation over the fresh draw w' is an average over a bank, so reusing
// one bank for both terms of a difference gives common random numbers.
class SampleBank {
 public:
  struct Sample {
    WeightVector weights;
    double probability;
  };

  static SampleBank Build(const WeightProfile& profile,
                          const Estimator& estimator);
  static SampleBank FromOutcomes(const OutcomeTable& outcomes);
  // Equally weighted draws (Monte Carlo semantics).
  static SampleBank FromDraws(std::vector<WeightVector> draws);

  bool exact() const { return exact_; }
  std::size_t size() const { return samples_.size(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Sample>& samples() const { return samples_; }

  // Probability-weighted mean of fn(i); the standard error is reported in
  // Monte Carlo mode and is 0 for exact banks.
  Estimate Average(const std::function<double(std::size_t)>& fn) const;

 private:
  std::vector<Sample> samples_;
  bool exact_ = true;
};

// E[max_x w(x)].
Estimate ExpectMax(const WeightProfile& profile, const Estimator& estimator);

}  // namespace prophet

#endif  // PROPHET_WEIGHTS_H_
