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

#include "prophet/mechanism.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "json.hpp"
#include "prophet/errors.h"
#include "prophet/harness.h"
#include "prophet/properties.h"
#include "prophet/remainder.h"

namespace prophet {

namespace {

Estimate MeanAndError(const std::vector<double>& values) {
  Estimate e;
  const double n = static_cast<double>(values.size());
  if (values.empty()) return e;
  for (double v : values) e.mean += v;
  e.mean /= n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (n - 1) / n);
  }
  return e;
}

std::vector<Element> Sorted(std::vector<Element> items) {
  std::sort(items.begin(), items.end());
  return items;
}

}  // namespace

double VirtualValue(const WeightDistribution& dist, double v) {
  switch (dist.kind()) {
    case WeightDistribution::Kind::kUniformInterval:
      return 2 * v - dist.b();
    case WeightDistribution::Kind::kExponential:
      return v - 1 / dist.rate();
    default:
      throw InputError("virtual values need a continuous distribution, got " +
                       dist.ToString());
  }
}

double InverseVirtual(const WeightDistribution& dist, double t) {
  if (std::isinf(t)) return t > 0 ? kInfiniteThreshold : dist.SupportMin();
  switch (dist.kind()) {
    case WeightDistribution::Kind::kUniformInterval: {
      if (t < VirtualValue(dist, dist.a())) return dist.a();
      if (t > VirtualValue(dist, dist.b())) return kInfiniteThreshold;
      return (t + dist.b()) / 2;
    }
    case WeightDistribution::Kind::kExponential: {
      const double v = t + 1 / dist.rate();
      return v < 0 ? 0.0 : v;
    }
    default:
      throw InputError("virtual values need a continuous distribution, got " +
                       dist.ToString());
  }
}

bool RegularityCheck(const WeightDistribution& dist, int grid_size) {
  const int grid = std::max(grid_size, kMinRegularityGrid);
  const double lo = dist.SupportMin();
  const double hi = std::isinf(dist.SupportMax()) ? dist.Quantile(1 - 1e-9)
                                                  : dist.SupportMax();
  double prev = VirtualValue(dist, lo);
  for (int k = 1; k < grid; ++k) {
    const double v = lo + (hi - lo) * k / (grid - 1);
    const double cur = VirtualValue(dist, v);
    if (cur < prev - 1e-12) return false;
    prev = cur;
  }
  return true;
}

void BMUMDInstance::Validate() const {
  const int m = num_items();
  if (m == 0) throw InputError("mechanism instance has no items");
  std::vector<int> owner(m, -1);
  for (int i = 0; i < num_bidders(); ++i) {
    for (Element x : bidders[i]) {
      if (x < 0 || x >= m) throw InputError("item id out of range");
      if (owner[x] != -1) throw InputError("item listed for two bidders");
      owner[x] = i;
    }
  }
  if (std::count(owner.begin(), owner.end(), -1) > 0) {
    throw InputError("every item must belong to a bidder");
  }
  for (const WeightDistribution& d : values) {
    if (!d.IsContinuous()) {
      throw InputError("item values need a continuous distribution, got " +
                       d.ToString());
    }
    if (!RegularityCheck(d, 64)) {
      throw InputError(d.ToString() +
                       " is not regular; ironing is not supported");
    }
  }
  for (const MatroidPtr& f : feasibility) {
    if (f->universe_size() != m) {
      throw InputError("feasibility constraint size differs from item count");
    }
  }
}

PostedPrices::PostedPrices(BMUMDInstance instance,
                           const MechanismOptions& options)
    : instance_(std::move(instance)), table_cap_(options.table_cap) {
  instance_.Validate();
  if (options.inner_samples < 1) throw InputError("inner_samples must be >= 1");
  const int m = instance_.num_items();
  bidder_of_.assign(m, -1);
  for (int i = 0; i < instance_.num_bidders(); ++i) {
    for (Element x : instance_.bidders[i]) bidder_of_[x] = i;
  }
  constraints_ = instance_.feasibility;
  bool needs_partition = constraints_.empty();
  for (const auto& items : instance_.bidders) {
    for (std::size_t a = 0; a < items.size() && !needs_partition; ++a) {
      for (std::size_t b = a + 1; b < items.size() && !needs_partition; ++b) {
        needs_partition = FeasibleInAll(
            constraints_, ElementSet().With(items[a]).With(items[b]));
      }
    }
  }
  if (needs_partition) {
    std::vector<std::vector<Element>> blocks;
    for (const auto& items : instance_.bidders) {
      if (!items.empty()) blocks.push_back(items);
    }
    constraints_.push_back(
        MakePartition(m, blocks, std::vector<int>(blocks.size(), 1)));
    added_partition_ = true;
  }

  std::vector<WeightVector> draws;
  draws.reserve(options.inner_samples);
  for (int t = 0; t < options.inner_samples; ++t) {
    RandomStream stream = RandomStream::ForTrial(options.seed, t);
    WeightVector w(m);
    for (int x = 0; x < m; ++x) {
      w[x] = std::max(
          VirtualValue(instance_.values[x], instance_.values[x].Sample(stream)),
          0.0);
    }
    draws.push_back(std::move(w));
  }
  auto oracle = std::make_shared<RemainderOracle>(
      constraints_, SampleBank::FromDraws(std::move(draws)));
  const int p = static_cast<int>(constraints_.size());
  policy_ = std::make_shared<BalancedPolicy>(std::move(oracle),
                                             p == 1 ? 2.0 : 2.0 * p);
}

double PostedPrices::Threshold(const ElementSet& a, Element x) const {
  return policy_->Threshold(a, x);
}

double PostedPrices::Price(const ElementSet& a, Element x) const {
  const double t = Threshold(a, x);
  if (std::isinf(t)) return kInfiniteThreshold;
  return InverseVirtual(instance_.values[x], t);
}

MechanismOutcome RunMechanismM(const PostedPrices& prices,
                               const std::vector<double>& bids) {
  const BMUMDInstance& inst = prices.instance();
  if (static_cast<int>(bids.size()) != inst.num_items()) {
    throw InputError("one bid per item is required");
  }
  MechanismOutcome out;
  out.payments.assign(inst.num_bidders(), 0.0);
  out.prices.assign(inst.num_items(), kInfiniteThreshold);
  for (int i = 0; i < inst.num_bidders(); ++i) {
    Element choice = -1;
    double best_utility = 0;
    for (Element x : Sorted(inst.bidders[i])) {
      const double p = prices.Price(out.allocation, x);
      out.prices[x] = p;
      if (std::isinf(p) || bids[x] < p) continue;
      const double utility = bids[x] - p;
      if (choice == -1 || utility > best_utility) {
        choice = x;
        best_utility = utility;
      }
    }
    if (choice == -1) continue;
    out.allocation.Insert(choice);
    out.payments[i] = out.prices[choice];
    out.revenue += out.prices[choice];
    out.virtual_surplus += VirtualValue(inst.values[choice], bids[choice]);
  }
  return out;
}

std::size_t DPTable::size() const {
  std::size_t total = 0;
  for (const auto& level : levels_) total += level.size();
  return total;
}

bool DPTable::Contains(const ElementSet& a, int i) const {
  return i >= 0 && i < static_cast<int>(levels_.size()) && levels_[i].count(a);
}

const DPTable::Entry& DPTable::At(const ElementSet& a, int i) const {
  if (!Contains(a, i)) {
    throw InputError("no table entry for A=" + a.ToString() + " at bidder " +
                     std::to_string(i));
  }
  return levels_[i].at(a);
}

std::vector<ElementSet> DPTable::States(int i) const {
  std::vector<ElementSet> states;
  for (const auto& [a, entry] : levels_.at(i)) states.push_back(a);
  std::sort(states.begin(), states.end(),
            [](const ElementSet& x, const ElementSet& y) { return LexLess(x, y); });
  return states;
}

DPTable BuildAdversaryDP(const PostedPrices& prices) {
  const BMUMDInstance& inst = prices.instance();
  const int n = inst.num_bidders();
  const auto& constraints = prices.constraints();

  // Feasible allocations after each prefix of bidders.
  std::vector<std::vector<ElementSet>> states(n + 1);
  states[0].push_back(ElementSet());
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    states[i + 1] = states[i];
    for (const ElementSet& a : states[i]) {
      for (Element x : inst.bidders[i]) {
        const ElementSet ax = a.With(x);
        if (FeasibleInAll(constraints, ax)) states[i + 1].push_back(ax);
      }
    }
    total += states[i + 1].size();
    if (total > prices.table_cap()) {
      throw RefusedError("adversary table exceeds " +
                         std::to_string(prices.table_cap()) + " entries");
    }
  }

  DPTable table;
  table.levels_.resize(n + 1);
  for (const ElementSet& a : states[n]) table.levels_[n][a] = DPTable::Entry{};
  for (int i = n - 1; i >= 0; --i) {
    const auto& next = table.levels_[i + 1];
    for (const ElementSet& a : states[i]) {
      std::vector<std::tuple<double, Element, double>> ranked;
      for (Element x : inst.bidders[i]) {
        const double p = prices.Price(a, x);
        const double key =
            std::isinf(p) ? kInfiniteThreshold : p + next.at(a.With(x)).value;
        ranked.emplace_back(key, x, p);
      }
      std::sort(ranked.begin(), ranked.end());
      DPTable::Entry entry;
      double none_yet = 1;  // probability no earlier item was affordable
      for (const auto& [key, x, p] : ranked) {
        entry.order.push_back(x);
        entry.prices.push_back(p);
        if (std::isinf(p)) continue;
        const double f = inst.values[x].Cdf(p);
        entry.value += none_yet * (1 - f) * key;
        none_yet *= f;
      }
      entry.value += none_yet * next.at(a).value;
      table.levels_[i][a] = std::move(entry);
    }
  }
  return table;
}

MechanismOutcome RunMechanismCopies(const PostedPrices& prices,
                                    const DPTable& table,
                                    const std::vector<double>& bids) {
  const BMUMDInstance& inst = prices.instance();
  if (static_cast<int>(bids.size()) != inst.num_items()) {
    throw InputError("one bid per item is required");
  }
  const int n = inst.num_bidders();

  // Ordering from the adversary's main loop with v = b. The allocation
  // state after bidder i is indexed i + 1 in the table.
  MechanismOutcome out;
  ElementSet a;
  for (int i = 0; i < n; ++i) {
    const DPTable::Entry& entry = table.At(a, i);
    Element bought = -1;
    for (std::size_t k = 0; k < entry.order.size(); ++k) {
      out.ordering.push_back(entry.order[k]);
      if (bought == -1 && bids[entry.order[k]] >= entry.prices[k]) {
        bought = entry.order[k];
      }
    }
    if (bought != -1) a.Insert(bought);
  }

  // Prophet run on virtual weights in that order.
  InputSequence sequence;
  for (Element x : out.ordering) {
    sequence.emplace_back(x, VirtualValue(inst.values[x], bids[x]));
  }
  const SelectionTrace trace = RunPolicy(prices.policy(), sequence);
  out.prophet_selection = trace.accepted;

  out.payments.assign(n, 0.0);
  out.prices.assign(inst.num_items(), kInfiniteThreshold);
  for (const TraceStep& s : trace.steps) {
    out.prices[s.element] = std::isinf(s.threshold)
                                ? kInfiniteThreshold
                                : InverseVirtual(inst.values[s.element], s.threshold);
  }
  std::vector<char> served(n, 0);
  for (Element x : out.ordering) {
    const int i = prices.bidder_of(x);
    if (served[i] || bids[x] < out.prices[x]) continue;
    served[i] = 1;
    out.allocation.Insert(x);
    out.payments[i] = out.prices[x];
    out.revenue += out.prices[x];
    out.virtual_surplus += VirtualValue(inst.values[x], bids[x]);
  }
  return out;
}

double CopiesRevenueFrom(const PostedPrices& prices, const DPTable& table,
                         const ElementSet& a, int i,
                         const std::vector<double>& bids) {
  ElementSet current = a;
  double revenue = 0;
  for (int k = i; k < prices.instance().num_bidders(); ++k) {
    const DPTable::Entry& entry = table.At(current, k);
    for (std::size_t j = 0; j < entry.order.size(); ++j) {
      if (bids[entry.order[j]] >= entry.prices[j]) {
        revenue += entry.prices[j];
        current.Insert(entry.order[j]);
        break;
      }
    }
  }
  return revenue;
}

RevenueStats ComputeRevenueStats(const PostedPrices& prices,
                                 const DPTable& table, std::size_t trials,
                                 std::uint64_t seed, int workers) {
  if (trials < 1) throw InputError("trials must be >= 1");
  const BMUMDInstance& inst = prices.instance();
  const int m = inst.num_items();
  const double factor =
      GuaranteeFactor(static_cast<int>(prices.constraints().size()),
                      prices.alpha());
  std::vector<double> r_m(trials), r_c(trials), phi_c(trials), phi_opt(trials);
  std::vector<char> mismatch(trials, 0), infeasible(trials, 0);
  // Warm the threshold cache on the sequential path so that worker threads
  // mostly read.
  RunMechanismCopies(prices, table, std::vector<double>(m, 0.0));
  ParallelFor(trials, workers, [&](std::size_t t) {
    RandomStream stream = RandomStream::ForTrial(seed, t);
    std::vector<double> bids(m);
    WeightVector clipped(m);
    for (int x = 0; x < m; ++x) {
      bids[x] = inst.values[x].Sample(stream);
      clipped[x] = std::max(VirtualValue(inst.values[x], bids[x]), 0.0);
    }
    const MechanismOutcome om = RunMechanismM(prices, bids);
    const MechanismOutcome oc = RunMechanismCopies(prices, table, bids);
    r_m[t] = om.revenue;
    r_c[t] = oc.revenue;
    phi_c[t] = oc.virtual_surplus;
    phi_opt[t] = SetWeight(
        MaxWeightFeasibleIntersection(prices.constraints(), clipped), clipped);
    mismatch[t] = !(oc.allocation == oc.prophet_selection);
    infeasible[t] = !FeasibleInAll(prices.constraints(), om.allocation) ||
                    !FeasibleInAll(prices.constraints(), oc.allocation);
  });
  RevenueStats s;
  s.trials = trials;
  s.seed = seed;
  s.r_m = MeanAndError(r_m);
  s.r_copies = MeanAndError(r_c);
  s.phi_copies = MeanAndError(phi_c);
  s.phi_opt_copies = MeanAndError(phi_opt);
  std::vector<double> d1(trials), d2(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    d1[t] = r_m[t] - r_c[t];
    d2[t] = phi_c[t] - factor * phi_opt[t];
  }
  s.m_minus_copies = MeanAndError(d1);
  s.phi_copies_minus_bound = MeanAndError(d2);
  s.dp_value = table.Value(ElementSet(), 0);
  s.allocation_mismatches = std::count(mismatch.begin(), mismatch.end(), 1);
  s.infeasible_allocations = std::count(infeasible.begin(), infeasible.end(), 1);
  return s;
}

std::string RevenueCsvRow(const RevenueStats& s) {
  return FormatNumber(s.r_m.mean) + "," + FormatNumber(s.r_copies.mean) + "," +
         FormatNumber(s.phi_copies.mean) + "," +
         FormatNumber(s.phi_opt_copies.mean) + "," +
         FormatNumber(s.r_m.std_error) + "," +
         FormatNumber(s.r_copies.std_error) + "," +
         FormatNumber(s.phi_copies.std_error) + "," +
         FormatNumber(s.phi_opt_copies.std_error) + "," +
         std::to_string(s.trials) + "," + std::to_string(s.seed);
}

std::string RevenueJson(const RevenueStats& s) {
  nlohmann::ordered_json out;
  out["R_M"] = s.r_m.mean;
  out["R_copies"] = s.r_copies.mean;
  out["Phi_copies"] = s.phi_copies.mean;
  out["Phi_optCopies"] = s.phi_opt_copies.mean;
  out["R_M_stderr"] = s.r_m.std_error;
  out["R_copies_stderr"] = s.r_copies.std_error;
  out["Phi_copies_stderr"] = s.phi_copies.std_error;
  out["Phi_optCopies_stderr"] = s.phi_opt_copies.std_error;
  out["trials"] = s.trials;
  out["seed"] = s.seed;
  out["V_empty_0"] = s.dp_value;
  out["allocation_mismatches"] = s.allocation_mismatches;
  out["infeasible_allocations"] = s.infeasible_allocations;
  return out.dump(2) + "\n";
}

BMUMDInstance TwoByTwoUniform() {
  BMUMDInstance inst;
  inst.name = "two_by_two_uniform";
  inst.bidders = {{0, 1}, {2, 3}};
  inst.values.assign(4, WeightDistribution::UniformInterval(0, 1));
  inst.feasibility = {MakeUniform(4, 1)};
  return inst;
}

}  // namespace prophet
