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

#include "prophet/weights.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "prophet/errors.h"

namespace prophet {

WeightDistribution WeightDistribution::PointMass(double value) {
  if (!(value >= 0) || !std::isfinite(value)) {
    throw InputError("point mass must be a finite non-negative value");
  }
  WeightDistribution d;
  d.kind_ = Kind::kPointMass;
  d.values_ = {value};
  d.probs_ = {1.0};
  d.cumulative_ = {1.0};
  return d;
}

WeightDistribution WeightDistribution::FiniteDiscrete(std::vector<double> values,
                                                      std::vector<double> probs) {
  if (values.size() != probs.size() || values.empty()) {
    throw InputError("finite distribution needs matching non-empty values/probs");
  }
  std::map<double, double> merged;
  double total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0) || !std::isfinite(values[i])) {
      throw InputError("weights must be finite and non-negative");
    }
    if (!(probs[i] >= 0)) throw InputError("negative probability");
    total += probs[i];
    if (probs[i] > 0) merged[values[i]] += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InputError("probabilities must sum to 1");
  }
  WeightDistribution d;
  d.kind_ = Kind::kFiniteDiscrete;
  double running = 0;
  for (const auto& [v, p] : merged) {
    d.values_.push_back(v);
    d.probs_.push_back(p);
    running += p;
    d.cumulative_.push_back(running);
  }
  d.cumulative_.back() = 1.0;
  if (d.values_.size() == 1) d.kind_ = Kind::kPointMass;
  return d;
}

WeightDistribution WeightDistribution::Bernoulli(double value, double p) {
  if (!(p >= 0 && p <= 1)) throw InputError("bernoulli p must lie in [0,1]");
  return FiniteDiscrete({0.0, value}, {1.0 - p, p});
}

WeightDistribution WeightDistribution::UniformInterval(double a, double b) {
  if (!(a >= 0) || !(b > a) || !std::isfinite(b)) {
    throw InputError("uniform interval needs 0 <= a < b < inf");
  }
  WeightDistribution d;
  d.kind_ = Kind::kUniformInterval;
  d.a_ = a;
  d.b_ = b;
  return d;
}

WeightDistribution WeightDistribution::Exponential(double rate) {
  if (!(rate > 0) || !std::isfinite(rate)) {
    throw InputError("exponential rate must be positive");
  }
  WeightDistribution d;
  d.kind_ = Kind::kExponential;
  d.rate_ = rate;
  return d;
}

double WeightDistribution::Cdf(double v) const {
  switch (kind_) {
    case Kind::kPointMass:
    case Kind::kFiniteDiscrete: {
      const auto it = std::upper_bound(values_.begin(), values_.end(), v);
      if (it == values_.begin()) return 0.0;
      return cumulative_[std::distance(values_.begin(), it) - 1];
    }
    case Kind::kUniformInterval:
      if (v <= a_) return 0.0;
      if (v >= b_) return 1.0;
      return (v - a_) / (b_ - a_);
    case Kind::kExponential:
      return v <= 0 ? 0.0 : -std::expm1(-rate_ * v);
  }
  return 0.0;
}

double WeightDistribution::Pdf(double v) const {
  switch (kind_) {
    case Kind::kUniformInterval:
      return (v >= a_ && v <= b_) ? 1.0 / (b_ - a_) : 0.0;
    case Kind::kExponential:
      return v < 0 ? 0.0 : rate_ * std::exp(-rate_ * v);
    default:
      throw InputError("density undefined for a finite distribution");
  }
}

double WeightDistribution::Quantile(double u) const {
  switch (kind_) {
    case Kind::kPointMass:
    case Kind::kFiniteDiscrete: {
      const auto it =
          std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto idx = std::min<std::size_t>(
          std::distance(cumulative_.begin(), it), values_.size() - 1);
      return values_[idx];
    }
    case Kind::kUniformInterval:
      return a_ + u * (b_ - a_);
    case Kind::kExponential:
      return -std::log1p(-u) / rate_;
  }
  return 0.0;
}

double WeightDistribution::Mean() const {
  switch (kind_) {
    case Kind::kPointMass:
    case Kind::kFiniteDiscrete: {
      double m = 0;
      for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * probs_[i];
      return m;
    }
    case Kind::kUniformInterval:
      return 0.5 * (a_ + b_);
    case Kind::kExponential:
      return 1.0 / rate_;
  }
  return 0.0;
}

double WeightDistribution::SupportMin() const {
  switch (kind_) {
    case Kind::kPointMass:
    case Kind::kFiniteDiscrete:
      return values_.front();
    case Kind::kUniformInterval:
      return a_;
    case Kind::kExponential:
      return 0.0;
  }
  return 0.0;
}

double WeightDistribution::SupportMax() const {
  switch (kind_) {
    case Kind::kPointMass:
    case Kind::kFiniteDiscrete:
      return values_.back();
    case Kind::kUniformInterval:
      return b_;
    case Kind::kExponential:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::string WeightDistribution::ToString() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kPointMass:
      os << "point_mass(" << values_[0] << ")";
      break;
    case Kind::kFiniteDiscrete:
      os << "finite_discrete(";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        os << (i ? "," : "") << values_[i] << ":" << probs_[i];
      }
      os << ")";
      break;
    case Kind::kUniformInterval:
      os << "uniform(" << a_ << "," << b_ << ")";
      break;
    case Kind::kExponential:
      os << "exponential(" << rate_ << ")";
      break;
  }
  return os.str();
}

WeightProfile::WeightProfile(std::vector<WeightDistribution> distributions)
    : distributions_(std::move(distributions)) {}

bool WeightProfile::AllFinite() const {
  return std::all_of(distributions_.begin(), distributions_.end(),
                     [](const WeightDistribution& d) { return d.IsFinite(); });
}

WeightVector WeightProfile::Sample(RandomStream& stream) const {
  WeightVector w(distributions_.size());
  for (std::size_t x = 0; x < distributions_.size(); ++x) {
    w[x] = distributions_[x].Sample(stream);
  }
  return w;
}

std::size_t OutcomeCount(const WeightProfile& profile) {
  std::size_t count = 1;
  for (const WeightDistribution& d : profile.distributions()) {
    if (!d.IsFinite()) return 0;
    const std::size_t k = d.values().size();
    if (count > std::numeric_limits<std::size_t>::max() / k) {
      return std::numeric_limits<std::size_t>::max();
    }
    count *= k;
  }
  return count;
}

OutcomeTable EnumerateOutcomes(const WeightProfile& profile, std::size_t cap) {
  if (!profile.AllFinite()) {
    throw RefusedError("exact enumeration needs finite distributions only");
  }
  const std::size_t count = OutcomeCount(profile);
  if (count > cap) {
    throw RefusedError("outcome space of " + std::to_string(count) +
                       " exceeds the enumeration cap of " +
                       std::to_string(cap));
  }
  const int n = profile.size();
  OutcomeTable table;
  table.reserve(count);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t k = 0; k < count; ++k) {
    Outcome outcome{WeightVector(n), 1.0};
    for (int x = 0; x < n; ++x) {
      const WeightDistribution& d = profile.at(x);
      outcome.weights[x] = d.values()[digit[x]];
      outcome.probability *= d.probs()[digit[x]];
    }
    table.push_back(std::move(outcome));
    // Odometer increment, last element fastest.
    for (int x = n - 1; x >= 0; --x) {
      if (++digit[x] < profile.at(x).values().size()) break;
      digit[x] = 0;
    }
  }
  return table;
}

SampleBank SampleBank::Build(const WeightProfile& profile,
                             const Estimator& estimator) {
  if (estimator.exact()) return FromOutcomes(EnumerateOutcomes(profile));
  if (estimator.trials < 1) throw InputError("Monte Carlo needs trials >= 1");
  std::vector<WeightVector> draws;
  draws.reserve(estimator.trials);
  for (int t = 0; t < estimator.trials; ++t) {
    RandomStream stream = RandomStream::ForTrial(estimator.seed, t);
    draws.push_back(profile.Sample(stream));
  }
  return FromDraws(std::move(draws));
}

SampleBank SampleBank::FromOutcomes(const OutcomeTable& outcomes) {
  SampleBank bank;
  bank.exact_ = true;
  bank.samples_.reserve(outcomes.size());
  for (const Outcome& o : outcomes) {
    bank.samples_.push_back({o.weights, o.probability});
  }
  return bank;
}

SampleBank SampleBank::FromDraws(std::vector<WeightVector> draws) {
  if (draws.empty()) throw InputError("empty Monte Carlo sample");
  SampleBank bank;
  bank.exact_ = false;
  const double p = 1.0 / static_cast<double>(draws.size());
  bank.samples_.reserve(draws.size());
  for (WeightVector& w : draws) bank.samples_.push_back({std::move(w), p});
  return bank;
}

Estimate SampleBank::Average(
    const std::function<double(std::size_t)>& fn) const {
  Estimate e;
  if (exact_) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      e.mean += samples_[i].probability * fn(i);
    }
    return e;
  }
  // Welford.
  double mean = 0;
  double m2 = 0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double v = fn(i);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const auto n = static_cast<double>(samples_.size());
  e.mean = mean;
  e.std_error = n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0;
  return e;
}

Estimate ExpectMax(const WeightProfile& profile, const Estimator& estimator) {
  if (profile.size() == 0) throw InputError("empty profile");
  const SampleBank bank = SampleBank::Build(profile, estimator);
  return bank.Average([&](std::size_t i) {
    const WeightVector& w = bank[i].weights;
    return *std::max_element(w.begin(), w.end());
  });
}

}  // namespace prophet
