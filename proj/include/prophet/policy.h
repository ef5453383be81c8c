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

#ifndef PROPHET_POLICY_H_
#define PROPHET_POLICY_H_

#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prophet/element_set.h"
#include "prophet/matroid.h"
#include "prophet/remainder.h"
#include "prophet/weights.h"

namespace prophet {

inline constexpr double kInfiniteThreshold =
    std::numeric_limits<double>::infinity();

// A monotone online selection rule described by thresholds T(A, x): element x
// is accepted when its weight is at least T(A, x), where A is the set accepted
// so far. T(A, x) is +inf whenever A + x is infeasible. Thresholds depend only
// on (A, x), never on the order in which elements arrive.
class ThresholdPolicy {
 public:
  explicit ThresholdPolicy(std::vector<MatroidPtr> constraints);
  virtual ~ThresholdPolicy() = default;

  double Threshold(const ElementSet& accepted, Element x) const;
  bool Feasible(const ElementSet& s) const;

  const std::vector<MatroidPtr>& constraints() const { return constraints_; }
  int universe_size() const { return constraints_[0]->universe_size(); }
  virtual std::string Name() const = 0;

 protected:
  // Called only when accepted + x is feasible.
  virtual double FeasibleThreshold(const ElementSet& accepted,
                                   Element x) const = 0;

 private:
  std::vector<MatroidPtr> constraints_;
};

using PolicyPtr = std::shared_ptr<const ThresholdPolicy>;

// Same threshold for every feasible addition.
class ConstantThresholdPolicy : public ThresholdPolicy {
 public:
  ConstantThresholdPolicy(std::vector<MatroidPtr> constraints, double value,
                          std::string name);
  double value() const { return value_; }
  std::string Name() const override { return name_; }

 protected:
  double FeasibleThreshold(const ElementSet&, Element) const override {
    return value_;
  }

 private:
  double value_;
  std::string name_;
};

// T(A, x) = sum_j (1/alpha) E[w'(R_j(A)) - w'(R_j(A + x))]. With one matroid
// and alpha = 2 this is the 2-balanced single-matroid rule. Expected
// remainders are cached per accepted set; A only grows along a trace, so the
// cache holds at most one entry per reachable feasible set.
class BalancedPolicy : public ThresholdPolicy {
 public:
  BalancedPolicy(std::shared_ptr<const RemainderOracle> oracle, double alpha);

  double alpha() const { return alpha_; }
  const RemainderOracle& oracle() const { return *oracle_; }
  int num_matroids() const { return oracle_->num_matroids(); }
  std::string Name() const override;

  // Threshold with its Monte Carlo standard error; +inf when infeasible.
  Estimate ThresholdEstimate(const ElementSet& accepted, Element x) const;
  // E[w'(R_j(A))] for every j, cached.
  std::vector<double> ExpectedRemainders(const ElementSet& a) const;

 protected:
  double FeasibleThreshold(const ElementSet& accepted, Element x) const override;

 private:
  std::shared_ptr<const RemainderOracle> oracle_;
  double alpha_;
  mutable std::mutex mu_;
  mutable std::unordered_map<ElementSet, std::vector<double>, ElementSetHash>
      cache_;
};

// Multiplies another policy's finite thresholds by `factor`; used for
// mutation tests of the property checkers.
class ScaledPolicy : public ThresholdPolicy {
 public:
  ScaledPolicy(PolicyPtr inner, double factor);
  std::string Name() const override;

 protected:
  double FeasibleThreshold(const ElementSet& accepted, Element x) const override;

 private:
  PolicyPtr inner_;
  double factor_;
};

// alpha_p = p + sqrt(p (p - 1)), the best constant for p constraints.
double OptimalAlpha(int p);

std::shared_ptr<BalancedPolicy> MakeMatroidBalancedPolicy(
    const MatroidPtr& m, const WeightProfile& profile,
    const Estimator& estimator);
// alpha defaults to 2p. Throws InputError for alpha <= 1.
std::shared_ptr<BalancedPolicy> MakeIntersectionBalancedPolicy(
    const std::vector<MatroidPtr>& matroids, const WeightProfile& profile,
    double alpha, const Estimator& estimator);
std::shared_ptr<const RemainderOracle> MakeOracle(
    const std::vector<MatroidPtr>& matroids, const WeightProfile& profile,
    const Estimator& estimator);

// E[max] / 2.
double RankOneThreshold(const WeightProfile& profile,
                        const Estimator& estimator = Estimator::Exact());
// inf { t >= 0 : Pr(max > t) <= 1/2 }.
double SamuelCahnThreshold(const WeightProfile& profile);

PolicyPtr MakeRankOneHalfMaxPolicy(std::vector<MatroidPtr> constraints,
                                   const WeightProfile& profile,
                                   const Estimator& estimator = Estimator::Exact());
PolicyPtr MakeSamuelCahnPolicy(std::vector<MatroidPtr> constraints,
                               const WeightProfile& profile);

// Single-matroid threshold through remainders and through costs. Both return
// +inf when A + x is dependent.
double ThresholdSingle(const MatroidPtr& m, const WeightProfile& profile,
                       const ElementSet& a, Element x,
                       const Estimator& estimator);
double ThresholdSingleViaCost(const MatroidPtr& m, const WeightProfile& profile,
                              const ElementSet& a, Element x,
                              const Estimator& estimator);
Estimate ThresholdSingleEstimate(const MatroidPtr& m,
                                 const WeightProfile& profile,
                                 const ElementSet& a, Element x,
                                 const Estimator& estimator);
Estimate ThresholdSingleViaCostEstimate(const MatroidPtr& m,
                                        const WeightProfile& profile,
                                        const ElementSet& a, Element x,
                                        const Estimator& estimator);
double ThresholdIntersection(const std::vector<MatroidPtr>& matroids,
                             const WeightProfile& profile, const ElementSet& a,
                             Element x, double alpha,
                             const Estimator& estimator);

struct TraceStep {
  Element element;
  double weight;
  double threshold;
  bool accepted;
};

struct SelectionTrace {
  std::vector<TraceStep> steps;
  ElementSet accepted;
  double payoff = 0;

  // Threshold the element faced when revealed; throws if it never appeared.
  double ThresholdOf(Element x) const;
};

using InputSequence = std::vector<std::pair<Element, double>>;

// Runs the policy online over (element, weight) pairs. Throws InputError on a
// repeated or unknown element.
SelectionTrace RunPolicy(const ThresholdPolicy& policy,
                         std::span<const std::pair<Element, double>> sequence);

// One JSON object per line: {"element","weight","threshold","decision"}, with
// the string "inf" for infinite thresholds.
std::string TraceToJsonLines(const SelectionTrace& trace);

struct BalanceVerdict {
  bool alpha_holds = false;
  bool beta_holds = false;
  double alpha_slack = 0;  // sum_{A} T_i - (1/alpha) E[sum_j w'(C_j(A))]
  double beta_slack = 0;   // bound - sum_{V} T_i
  double alpha_std_error = 0;
  double beta_std_error = 0;
};

// Evaluates both balanced-threshold inequalities for the trace's accepted set
// A and a set V disjoint from A with A + V feasible. For one matroid the
// rejected-set bound is (1 - 1/alpha) E[w'(R(A))]; for intersections it is
// (1/alpha) E[sum_j w'(R_j(A))]. Exact banks use `tolerance`; Monte Carlo
// verdicts fail only below -3 standard errors.
BalanceVerdict CheckBalanced(const BalancedPolicy& policy,
                             const SelectionTrace& trace, const ElementSet& v,
                             double tolerance = 1e-9);

}  // namespace prophet

#endif  // PROPHET_POLICY_H_
