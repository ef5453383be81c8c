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

#include "prophet/policy.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "prophet/errors.h"

namespace prophet {

ThresholdPolicy::ThresholdPolicy(std::vector<MatroidPtr> constraints)
    : constraints_(std::move(constraints)) {
  if (constraints_.empty()) throw InputError("a policy needs a constraint");
  for (const MatroidPtr& m : constraints_) {
    if (m->universe_size() != constraints_[0]->universe_size()) {
      throw InputError("all constraints must share the ground set");
    }
  }
}

bool ThresholdPolicy::Feasible(const ElementSet& s) const {
  return FeasibleInAll(constraints_, s);
}

double ThresholdPolicy::Threshold(const ElementSet& accepted, Element x) const {
  if (accepted.Contains(x)) throw InputError("element already accepted");
  if (!Feasible(accepted.With(x))) return kInfiniteThreshold;
  return FeasibleThreshold(accepted, x);
}

ConstantThresholdPolicy::ConstantThresholdPolicy(
    std::vector<MatroidPtr> constraints, double value, std::string name)
    : ThresholdPolicy(std::move(constraints)),
      value_(value),
      name_(std::move(name)) {}

BalancedPolicy::BalancedPolicy(std::shared_ptr<const RemainderOracle> oracle,
                               double alpha)
    : ThresholdPolicy(oracle->matroids()),
      oracle_(std::move(oracle)),
      alpha_(alpha) {
  if (!(alpha > 1)) throw InputError("alpha must exceed 1");
}

std::string BalancedPolicy::Name() const {
  return num_matroids() == 1 && alpha_ == 2.0 ? "matroid_balanced"
                                              : "intersection_balanced";
}

std::vector<double> BalancedPolicy::ExpectedRemainders(
    const ElementSet& a) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
  }
  std::vector<double> values(num_matroids());
  for (int j = 0; j < num_matroids(); ++j) {
    values[j] = oracle_->ExpectedRemainder(a, j).mean;
  }
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(a, values);
  return values;
}

double BalancedPolicy::FeasibleThreshold(const ElementSet& accepted,
                                         Element x) const {
  // Without common random numbers the two terms use separate draws, so the
  // per-set cache does not apply.
  if (oracle_->has_independent_bank()) {
    return std::max(ThresholdEstimate(accepted, x).mean, 0.0);
  }
  const std::vector<double> before = ExpectedRemainders(accepted);
  const std::vector<double> after = ExpectedRemainders(accepted.With(x));
  double total = 0;
  for (int j = 0; j < num_matroids(); ++j) {
    total += (before[j] - after[j]) / alpha_;
  }
  return std::max(total, 0.0);
}

Estimate BalancedPolicy::ThresholdEstimate(const ElementSet& accepted,
                                           Element x) const {
  if (!Feasible(accepted.With(x))) return {kInfiniteThreshold, 0.0};
  Estimate total;
  double variance = 0;
  for (int j = 0; j < num_matroids(); ++j) {
    const Estimate drop = oracle_->ExpectedRemainderDrop(accepted, x, j);
    total.mean += drop.mean / alpha_;
    variance += std::pow(drop.std_error / alpha_, 2);
  }
  // Per-constraint errors are combined as if independent; with common random
  // numbers across j this slightly misstates the error of the sum.
  total.std_error = std::sqrt(variance);
  total.mean = std::max(total.mean, 0.0);
  return total;
}

ScaledPolicy::ScaledPolicy(PolicyPtr inner, double factor)
    : ThresholdPolicy(inner->constraints()),
      inner_(std::move(inner)),
      factor_(factor) {}

std::string ScaledPolicy::Name() const {
  std::ostringstream os;
  os << inner_->Name() << "_x" << factor_;
  return os.str();
}

double ScaledPolicy::FeasibleThreshold(const ElementSet& accepted,
                                       Element x) const {
  return factor_ * inner_->Threshold(accepted, x);
}

double OptimalAlpha(int p) {
  if (p < 1) throw InputError("p must be positive");
  return p + std::sqrt(static_cast<double>(p) * (p - 1));
}

std::shared_ptr<const RemainderOracle> MakeOracle(
    const std::vector<MatroidPtr>& matroids, const WeightProfile& profile,
    const Estimator& estimator) {
  if (matroids.empty()) throw InputError("at least one matroid is required");
  if (profile.size() != matroids[0]->universe_size()) {
    throw InputError("profile size does not match the ground set");
  }
  SampleBank bank = SampleBank::Build(profile, estimator);
  std::optional<SampleBank> independent;
  if (!estimator.exact() && !estimator.common_random_numbers) {
    Estimator other = estimator;
    other.seed = SplitMix64(estimator.seed) + 1;
    independent = SampleBank::Build(profile, other);
  }
  return std::make_shared<RemainderOracle>(matroids, std::move(bank),
                                           std::move(independent));
}

std::shared_ptr<BalancedPolicy> MakeMatroidBalancedPolicy(
    const MatroidPtr& m, const WeightProfile& profile,
    const Estimator& estimator) {
  return std::make_shared<BalancedPolicy>(MakeOracle({m}, profile, estimator),
                                          2.0);
}

std::shared_ptr<BalancedPolicy> MakeIntersectionBalancedPolicy(
    const std::vector<MatroidPtr>& matroids, const WeightProfile& profile,
    double alpha, const Estimator& estimator) {
  if (!(alpha > 1)) throw InputError("alpha must exceed 1");
  return std::make_shared<BalancedPolicy>(
      MakeOracle(matroids, profile, estimator), alpha);
}

double RankOneThreshold(const WeightProfile& profile,
                        const Estimator& estimator) {
  return ExpectMax(profile, estimator).mean / 2.0;
}

double SamuelCahnThreshold(const WeightProfile& profile) {
  if (profile.size() == 0) throw InputError("empty profile");
  auto max_cdf = [&](double t) {
    double g = 1.0;
    for (const WeightDistribution& d : profile.distributions()) g *= d.Cdf(t);
    return g;
  };
  if (profile.AllFinite()) {
    std::set<double> candidates = {0.0};
    for (const WeightDistribution& d : profile.distributions()) {
      candidates.insert(d.values().begin(), d.values().end());
    }
    for (double t : candidates) {
      if (max_cdf(t) >= 0.5) return t;
    }
    return *candidates.rbegin();
  }
  if (max_cdf(0.0) >= 0.5) return 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (const WeightDistribution& d : profile.distributions()) {
    hi = std::max(hi, d.Quantile(1.0 - 1e-12));
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (max_cdf(mid) >= 0.5) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

PolicyPtr MakeRankOneHalfMaxPolicy(std::vector<MatroidPtr> constraints,
                                   const WeightProfile& profile,
                                   const Estimator& estimator) {
  return std::make_shared<ConstantThresholdPolicy>(
      std::move(constraints), RankOneThreshold(profile, estimator),
      "rank_one_half_max");
}

PolicyPtr MakeSamuelCahnPolicy(std::vector<MatroidPtr> constraints,
                               const WeightProfile& profile) {
  return std::make_shared<ConstantThresholdPolicy>(
      std::move(constraints), SamuelCahnThreshold(profile),
      "samuel_cahn_median");
}

Estimate ThresholdSingleEstimate(const MatroidPtr& m,
                                 const WeightProfile& profile,
                                 const ElementSet& a, Element x,
                                 const Estimator& estimator) {
  if (!m->IsIndependent(a)) throw InputError("A must be independent");
  if (!m->IsIndependent(a.With(x))) return {kInfiniteThreshold, 0.0};
  const auto oracle = MakeOracle({m}, profile, estimator);
  const Estimate drop = oracle->ExpectedRemainderDrop(a, x, 0);
  return {std::max(drop.mean / 2.0, 0.0), drop.std_error / 2.0};
}

Estimate ThresholdSingleViaCostEstimate(const MatroidPtr& m,
                                        const WeightProfile& profile,
                                        const ElementSet& a, Element x,
                                        const Estimator& estimator) {
  if (!m->IsIndependent(a)) throw InputError("A must be independent");
  if (!m->IsIndependent(a.With(x))) return {kInfiniteThreshold, 0.0};
  const auto oracle = MakeOracle({m}, profile, estimator);
  const Estimate rise = oracle->ExpectedCostRise(a, x, 0);
  return {std::max(rise.mean / 2.0, 0.0), rise.std_error / 2.0};
}

double ThresholdSingle(const MatroidPtr& m, const WeightProfile& profile,
                       const ElementSet& a, Element x,
                       const Estimator& estimator) {
  return ThresholdSingleEstimate(m, profile, a, x, estimator).mean;
}

double ThresholdSingleViaCost(const MatroidPtr& m, const WeightProfile& profile,
                              const ElementSet& a, Element x,
                              const Estimator& estimator) {
  return ThresholdSingleViaCostEstimate(m, profile, a, x, estimator).mean;
}

double ThresholdIntersection(const std::vector<MatroidPtr>& matroids,
                             const WeightProfile& profile, const ElementSet& a,
                             Element x, double alpha,
                             const Estimator& estimator) {
  if (!(alpha > 1)) throw InputError("alpha must exceed 1");
  if (!FeasibleInAll(matroids, a)) throw InputError("A must be feasible");
  if (!FeasibleInAll(matroids, a.With(x))) return kInfiniteThreshold;
  const BalancedPolicy policy(MakeOracle(matroids, profile, estimator), alpha);
  return policy.Threshold(a, x);
}

double SelectionTrace::ThresholdOf(Element x) const {
  for (const TraceStep& step : steps) {
    if (step.element == x) return step.threshold;
  }
  throw InputError("element " + std::to_string(x) + " not in trace");
}

SelectionTrace RunPolicy(const ThresholdPolicy& policy,
                         std::span<const std::pair<Element, double>> sequence) {
  SelectionTrace trace;
  ElementSet seen;
  for (const auto& [x, w] : sequence) {
    if (x < 0 || x >= policy.universe_size()) {
      throw InputError("unknown element " + std::to_string(x));
    }
    if (seen.Contains(x)) {
      throw InputError("element " + std::to_string(x) + " repeated in input");
    }
    seen.Insert(x);
    const double t = policy.Threshold(trace.accepted, x);
    const bool accept = w >= t;
    if (accept) {
      trace.accepted.Insert(x);
      trace.payoff += w;
    }
    trace.steps.push_back({x, w, t, accept});
  }
  return trace;
}

std::string TraceToJsonLines(const SelectionTrace& trace) {
  std::ostringstream os;
  for (const TraceStep& step : trace.steps) {
    nlohmann::ordered_json record;
    record["element"] = step.element;
    record["weight"] = step.weight;
    if (std::isinf(step.threshold)) {
      record["threshold"] = "inf";
    } else {
      record["threshold"] = step.threshold;
    }
    record["decision"] = step.accepted ? 1 : 0;
    os << record.dump() << '\n';
  }
  return os.str();
}

BalanceVerdict CheckBalanced(const BalancedPolicy& policy,
                             const SelectionTrace& trace, const ElementSet& v,
                             double tolerance) {
  const ElementSet& a = trace.accepted;
  if (!a.Disjoint(v)) throw InputError("V must be disjoint from A");
  if (!policy.Feasible(a.Union(v))) throw InputError("A + V must be feasible");

  double sum_accepted = 0;
  double sum_v = 0;
  ElementSet revealed;
  for (const TraceStep& step : trace.steps) {
    revealed.Insert(step.element);
    if (step.accepted) sum_accepted += step.threshold;
    if (v.Contains(step.element)) sum_v += step.threshold;
  }
  if (!v.IsSubsetOf(revealed)) {
    throw InputError("every element of V must appear in the trace");
  }

  const RemainderOracle& oracle = policy.oracle();
  const int p = oracle.num_matroids();
  const double inv_alpha = 1.0 / policy.alpha();
  const Estimate cost = oracle.bank().Average([&](std::size_t i) {
    double total = 0;
    for (int j = 0; j < p; ++j) total += oracle.CostWeight(i, a, j);
    return total;
  });
  const Estimate remainder = oracle.bank().Average([&](std::size_t i) {
    double total = 0;
    for (int j = 0; j < p; ++j) total += oracle.RemainderWeight(i, a, j);
    return total;
  });
  const double beta_factor = p == 1 ? 1.0 - inv_alpha : inv_alpha;

  BalanceVerdict verdict;
  verdict.alpha_slack = sum_accepted - inv_alpha * cost.mean;
  verdict.beta_slack = beta_factor * remainder.mean - sum_v;
  verdict.alpha_std_error = inv_alpha * cost.std_error;
  verdict.beta_std_error = beta_factor * remainder.std_error;
  if (oracle.exact()) {
    const double scale_a = std::max(1.0, std::abs(sum_accepted));
    const double scale_b = std::max(1.0, std::abs(sum_v));
    verdict.alpha_holds = verdict.alpha_slack >= -tolerance * scale_a;
    verdict.beta_holds = verdict.beta_slack >= -tolerance * scale_b;
  } else {
    verdict.alpha_holds = verdict.alpha_slack >= -3 * verdict.alpha_std_error;
    verdict.beta_holds = verdict.beta_slack >= -3 * verdict.beta_std_error;
  }
  return verdict;
}

}  // namespace prophet
