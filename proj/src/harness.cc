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

#include "prophet/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "prophet/errors.h"
#include "prophet/remainder.h"

namespace prophet {

namespace {

// One-sided 99% normal quantile.
constexpr double kZ99 = 2.3263478740408408;

struct StateKey {
  std::uint64_t revealed;
  std::uint64_t accepted;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const {
    return std::hash<std::uint64_t>()(k.revealed * 0x9e3779b97f4a7c15ULL ^
                                      k.accepted);
  }
};

// Backward induction over (revealed, accepted) states.
class GameSolver {
 public:
  enum class Mode { kMin, kAverage };

  GameSolver(const Instance& instance, const ThresholdPolicy& policy, Mode mode)
      : instance_(instance), policy_(policy), mode_(mode) {
    if (instance.size() > 64) {
      throw RefusedError("game solver supports at most 64 elements");
    }
    full_ = instance.size() == 64 ? ~std::uint64_t{0}
                                  : (std::uint64_t{1} << instance.size()) - 1;
  }

  double Value(std::uint64_t revealed, std::uint64_t accepted) {
    return Solve({revealed, accepted}).value;
  }

  Element Best(std::uint64_t revealed, std::uint64_t accepted) {
    return Solve({revealed, accepted}).best;
  }

 private:
  struct Entry {
    double value;
    Element best;
  };

  const AcceptanceMoments& Moments(std::uint64_t accepted, Element x) {
    auto& row = moments_[accepted];
    if (row.empty()) row.resize(instance_.size());
    auto& slot = row[x];
    if (!slot) {
      const double t = policy_.Threshold(ElementSet::FromMask(accepted), x);
      slot = AcceptanceAt(instance_.profile.at(x), t);
    }
    return *slot;
  }

  Entry Solve(StateKey key) {
    if (key.revealed == full_) return {0.0, -1};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Entry entry{mode_ == Mode::kMin ? kInfiniteThreshold : 0.0, -1};
    int remaining = 0;
    for (Element x = 0; x < instance_.size(); ++x) {
      const std::uint64_t bit = std::uint64_t{1} << x;
      if (key.revealed & bit) continue;
      ++remaining;
      const AcceptanceMoments m = Moments(key.accepted, x);
      double v = m.payoff;
      if (m.probability > 0) {
        v += m.probability * Solve({key.revealed | bit, key.accepted | bit}).value;
      }
      if (m.probability < 1) {
        v += (1 - m.probability) * Solve({key.revealed | bit, key.accepted}).value;
      }
      if (mode_ == Mode::kMin) {
        if (v < entry.value) entry = {v, x};
      } else {
        entry.value += v;
      }
    }
    if (mode_ == Mode::kAverage) entry.value /= remaining;
    if (memo_.size() >= kMaxGameStates) {
      throw RefusedError("game tree exceeds " + std::to_string(kMaxGameStates) +
                         " states");
    }
    memo_.emplace(key, entry);
    return entry;
  }

  const Instance& instance_;
  const ThresholdPolicy& policy_;
  Mode mode_;
  std::uint64_t full_;
  std::unordered_map<StateKey, Entry, StateKeyHash> memo_;
  std::unordered_map<std::uint64_t, std::vector<std::optional<AcceptanceMoments>>>
      moments_;
};

void CheckWorstCaseSize(const Instance& instance) {
  if (!instance.profile.AllFinite()) {
    throw RefusedError("worst-case adversary needs finite weight distributions");
  }
  if (OutcomeCount(instance.profile) > kMaxWorstCaseOutcomes) {
    throw RefusedError("worst-case adversary limited to " +
                       std::to_string(kMaxWorstCaseOutcomes) + " outcomes");
  }
}

Estimate Summarize(const std::vector<double>& values,
                   const std::vector<double>& probs, bool exact) {
  Estimate e;
  if (exact) {
    for (std::size_t i = 0; i < values.size(); ++i) e.mean += probs[i] * values[i];
    return e;
  }
  const double n = static_cast<double>(values.size());
  for (double v : values) e.mean += v;
  e.mean /= n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (n - 1) / n);
  }
  return e;
}

}  // namespace

std::string Adversary::Name() const {
  switch (kind) {
    case Kind::kFixedOrder:
      return "fixed";
    case Kind::kUniformRandom:
      return "uniform_random";
    case Kind::kGreedyAdaptive:
      return "greedy_adaptive";
    case Kind::kWorstCase:
      return "worst_case";
  }
  return "unknown";
}

AcceptanceMoments AcceptanceAt(const WeightDistribution& dist, double t) {
  AcceptanceMoments m;
  if (std::isinf(t)) return m;
  switch (dist.kind()) {
    case WeightDistribution::Kind::kPointMass:
    case WeightDistribution::Kind::kFiniteDiscrete:
      for (std::size_t k = 0; k < dist.values().size(); ++k) {
        if (dist.values()[k] >= t) {
          m.probability += dist.probs()[k];
          m.payoff += dist.probs()[k] * dist.values()[k];
        }
      }
      return m;
    case WeightDistribution::Kind::kUniformInterval: {
      const double a = dist.a();
      const double b = dist.b();
      const double lo = std::clamp(t, a, b);
      m.probability = (b - lo) / (b - a);
      m.payoff = (b * b - lo * lo) / (2 * (b - a));
      return m;
    }
    case WeightDistribution::Kind::kExponential: {
      const double lo = std::max(t, 0.0);
      const double rate = dist.rate();
      m.probability = std::exp(-rate * lo);
      m.payoff = (lo + 1 / rate) * m.probability;
      return m;
    }
  }
  return m;
}

double WorstCaseAdaptiveValue(const Instance& instance,
                              const ThresholdPolicy& policy) {
  CheckWorstCaseSize(instance);
  GameSolver solver(instance, policy, GameSolver::Mode::kMin);
  return solver.Value(0, 0);
}

double RandomOrderValue(const Instance& instance,
                        const ThresholdPolicy& policy) {
  GameSolver solver(instance, policy, GameSolver::Mode::kAverage);
  return solver.Value(0, 0);
}

Estimate ProphetValue(const Instance& instance, const Estimator& estimator) {
  const SampleBank bank = SampleBank::Build(instance.profile, estimator);
  return bank.Average([&](std::size_t i) {
    const WeightVector& w = bank[i].weights;
    return SetWeight(MaxWeightFeasibleIntersection(instance.matroids, w), w);
  });
}

int ResolveWorkers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void ParallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& fn) {
  const int n = std::min<std::size_t>(ResolveWorkers(workers), count);
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < n; ++t) threads.emplace_back(run);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

double SimulationReport::paired_mean(double bound) const {
  return gambler.mean - bound * prophet.mean;
}

double SimulationReport::GamblerUpper99() const {
  return gambler.mean + kZ99 * gambler.std_error;
}

double SimulationReport::PairedLower99(double bound) const {
  if (exact || gambler_values.size() < 2) return paired_mean(bound);
  const double n = static_cast<double>(gambler_values.size());
  const double mean = paired_mean(bound);
  double ss = 0;
  for (std::size_t i = 0; i < gambler_values.size(); ++i) {
    const double d = gambler_values[i] - bound * prophet_values[i] - mean;
    ss += d * d;
  }
  return mean - kZ99 * std::sqrt(ss / (n - 1) / n);
}

SimulationReport Simulate(const Instance& instance,
                          const ThresholdPolicy& policy,
                          const Adversary& adversary,
                          const SimulationOptions& options) {
  instance.Validate();
  const int n = instance.size();
  if (policy.universe_size() != n) {
    throw InputError("policy and instance sizes differ");
  }
  if (adversary.kind == Adversary::Kind::kFixedOrder && !adversary.order.empty()) {
    std::vector<Element> sorted = adversary.order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
      if (static_cast<int>(sorted.size()) != n || sorted[i] != i) {
        throw InputError("fixed order must be a permutation of the ground set");
      }
    }
  }

  const bool exact = options.estimator.exact();
  std::optional<GameSolver> solver;
  if (adversary.kind == Adversary::Kind::kWorstCase) {
    CheckWorstCaseSize(instance);
    solver.emplace(instance, policy, GameSolver::Mode::kMin);
  }

  SimulationReport report;
  report.instance = instance.name;
  report.policy = policy.Name();
  report.adversary = adversary.Name();
  report.exact = exact;

  const SampleBank bank = SampleBank::Build(instance.profile, options.estimator);
  const std::size_t count = bank.size();
  report.trials = count;

  std::vector<double> gambler(count);
  std::vector<double> prophet(count);
  std::vector<double> probs(count);
  std::vector<SelectionTrace> traces(options.keep_traces ? count : 0);

  // Exact random-order and worst-case values come from the game recursion;
  // per-outcome runs are only needed for the prophet side.
  const bool game_value =
      exact && (adversary.kind == Adversary::Kind::kUniformRandom ||
                adversary.kind == Adversary::Kind::kWorstCase);
  std::mutex solver_mu;

  auto next_adaptive = [&](std::uint64_t revealed, const ElementSet& accepted) {
    if (adversary.kind == Adversary::Kind::kWorstCase) {
      std::lock_guard<std::mutex> lock(solver_mu);
      return solver->Best(revealed, accepted.Mask());
    }
    Element best = -1;
    double best_payoff = kInfiniteThreshold;
    for (Element x = 0; x < n; ++x) {
      if (revealed & (std::uint64_t{1} << x)) continue;
      const double t = policy.Threshold(accepted, x);
      const double payoff = AcceptanceAt(instance.profile.at(x), t).payoff;
      if (payoff < best_payoff) {
        best_payoff = payoff;
        best = x;
      }
    }
    return best;
  };

  ParallelFor(count, options.workers, [&](std::size_t i) {
    const WeightVector& w = bank[i].weights;
    probs[i] = bank[i].probability;
    prophet[i] = SetWeight(MaxWeightFeasibleIntersection(instance.matroids, w), w);
    if (game_value) return;

    std::vector<Element> order;
    switch (adversary.kind) {
      case Adversary::Kind::kFixedOrder:
        order = adversary.order;
        if (order.empty()) order = ElementSet::Range(n).Elements();
        break;
      case Adversary::Kind::kUniformRandom: {
        order = ElementSet::Range(n).Elements();
        // Offset keeps the order stream apart from the weight stream.
        RandomStream stream =
            RandomStream::ForTrial(options.estimator.seed, i).Substream(1);
        stream.Shuffle(order);
        break;
      }
      case Adversary::Kind::kGreedyAdaptive:
      case Adversary::Kind::kWorstCase: {
        if (n > 64) throw RefusedError("adaptive adversaries support n <= 64");
        std::uint64_t revealed = 0;
        ElementSet accepted;
        for (int step = 0; step < n; ++step) {
          const Element x = next_adaptive(revealed, accepted);
          order.push_back(x);
          revealed |= std::uint64_t{1} << x;
          if (w[x] >= policy.Threshold(accepted, x)) accepted.Insert(x);
        }
        break;
      }
    }
    InputSequence sequence;
    sequence.reserve(n);
    for (Element x : order) sequence.emplace_back(x, w[x]);
    SelectionTrace trace = RunPolicy(policy, sequence);
    gambler[i] = trace.payoff;
    if (options.keep_traces) traces[i] = std::move(trace);
  });

  report.prophet = Summarize(prophet, probs, exact);
  if (game_value) {
    report.gambler.mean = adversary.kind == Adversary::Kind::kWorstCase
                              ? solver->Value(0, 0)
                              : RandomOrderValue(instance, policy);
  } else {
    report.gambler = Summarize(gambler, probs, exact);
  }
  report.ratio = report.prophet.mean > 0
                     ? report.gambler.mean / report.prophet.mean
                     : std::nan("");
  if (!exact) {
    report.gambler_values = std::move(gambler);
    report.prophet_values = std::move(prophet);
  }
  report.traces = std::move(traces);
  return report;
}

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string SimulationCsvRow(const SimulationReport& r) {
  return r.instance + "," + r.policy + "," + r.adversary + "," +
         std::to_string(r.trials) + "," + FormatNumber(r.gambler.mean) + "," +
         FormatNumber(r.gambler.std_error) + "," + FormatNumber(r.prophet.mean) +
         "," + FormatNumber(r.prophet.std_error) + "," + FormatNumber(r.ratio);
}

std::string SimulationJson(const std::vector<SimulationReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const SimulationReport& r : reports) {
    nlohmann::ordered_json row;
    row["instance"] = r.instance;
    row["policy"] = r.policy;
    row["adversary"] = r.adversary;
    row["trials"] = r.trials;
    row["exact"] = r.exact;
    row["gambler_mean"] = r.gambler.mean;
    row["gambler_stderr"] = r.gambler.std_error;
    row["prophet_mean"] = r.prophet.mean;
    row["prophet_stderr"] = r.prophet.std_error;
    row["ratio"] = std::isnan(r.ratio) ? nlohmann::ordered_json(nullptr)
                                       : nlohmann::ordered_json(r.ratio);
    out.push_back(std::move(row));
  }
  return out.dump(2) + "\n";
}

}  // namespace prophet
