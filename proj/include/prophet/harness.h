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

#ifndef PROPHET_HARNESS_H_
#define PROPHET_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "prophet/element_set.h"
#include "prophet/instance.h"
#include "prophet/policy.h"
#include "prophet/weights.h"

namespace prophet {

// Chooses the order in which elements are revealed to the gambler.
struct Adversary {
  enum class Kind { kFixedOrder, kUniformRandom, kGreedyAdaptive, kWorstCase };

  Kind kind = Kind::kFixedOrder;
  std::vector<Element> order;  // kFixedOrder only; empty means identity

  static Adversary Fixed(std::vector<Element> order = {}) {
    return {Kind::kFixedOrder, std::move(order)};
  }
  static Adversary UniformRandom() { return {Kind::kUniformRandom, {}}; }
  static Adversary GreedyAdaptive() { return {Kind::kGreedyAdaptive, {}}; }
  static Adversary WorstCase() { return {Kind::kWorstCase, {}}; }

  std::string Name() const;
};

// Pr[w >= t] and E[w 1{w >= t}] for one element; zeros when t is infinite.
struct AcceptanceMoments {
  double probability = 0;
  double payoff = 0;
};
AcceptanceMoments AcceptanceAt(const WeightDistribution& dist, double t);

inline constexpr std::size_t kMaxGameStates = 1'000'000;
inline constexpr std::size_t kMaxWorstCaseOutcomes = 100'000;

// Exact value of the gambler's expected payoff when the adversary picks each
// next element after seeing the revealed weights. Thresholds depend only on
// the accepted set, so (revealed, accepted) is a sufficient state. Refuses
// continuous profiles, n > 64 and games above kMaxGameStates states.
double WorstCaseAdaptiveValue(const Instance& instance,
                              const ThresholdPolicy& policy);
// Same recursion with the minimum replaced by the uniform average.
double RandomOrderValue(const Instance& instance, const ThresholdPolicy& policy);

Estimate ProphetValue(const Instance& instance, const Estimator& estimator);

struct SimulationOptions {
  // Exact enumerates the outcome table; Monte Carlo uses trials and seed.
  Estimator estimator;
  int workers = 0;  // 0 means hardware concurrency
  bool keep_traces = false;
};

struct SimulationReport {
  std::string instance;
  std::string policy;
  std::string adversary;
  std::size_t trials = 0;
  bool exact = true;
  Estimate gambler;
  Estimate prophet;
  double ratio = 0;
  std::vector<SelectionTrace> traces;

  // One-sided 99% upper confidence bound on the gambler mean.
  double GamblerUpper99() const;
  // One-sided 99% lower confidence bound on gambler - bound * prophet.
  double PairedLower99(double bound) const;
  double paired_mean(double bound) const;

  // Per-trial (gambler, prophet) pairs used for paired bounds in MC mode.
  std::vector<double> gambler_values;
  std::vector<double> prophet_values;
};

SimulationReport Simulate(const Instance& instance,
                          const ThresholdPolicy& policy,
                          const Adversary& adversary,
                          const SimulationOptions& options);

inline constexpr const char* kSimulationCsvHeader =
    "instance,policy,adversary,trials,gambler_mean,gambler_stderr,"
    "prophet_mean,prophet_stderr,ratio";
std::string FormatNumber(double v);
std::string SimulationCsvRow(const SimulationReport& report);
std::string SimulationJson(const std::vector<SimulationReport>& reports);

// Runs fn(i) for i in [0, count) on the given number of workers. Each index
// is visited exactly once; the caller stores results by index, so the output
// does not depend on scheduling.
void ParallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& fn);
int ResolveWorkers(int workers);

}  // namespace prophet

#endif  // PROPHET_HARNESS_H_
