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

#ifndef PROPHET_MECHANISM_H_
#define PROPHET_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "prophet/element_set.h"
#include "prophet/matroid.h"
#include "prophet/policy.h"
#include "prophet/weights.h"

namespace prophet {

// phi(v) = v - (1 - F(v)) / f(v). Closed forms for the uniform and
// exponential kinds; finite kinds have no density and are rejected.
double VirtualValue(const WeightDistribution& dist, double v);
// Smallest v with phi(v) = t. Returns the support minimum when t is below
// phi's range and infinity when t is above it.
double InverseVirtual(const WeightDistribution& dist, double t);
// phi increasing, up to a 1e-12 slack, on a grid of max(grid_size, 16)
// support points. Unbounded supports are cut at the 1 - 1e-9 quantile.
bool RegularityCheck(const WeightDistribution& dist, int grid_size);

inline constexpr int kMinRegularityGrid = 16;
inline constexpr std::size_t kDefaultTableCap = 200'000;

struct BMUMDInstance {
  std::string name;
  std::vector<std::vector<Element>> bidders;  // J_1..J_n, a partition of items
  std::vector<WeightDistribution> values;     // one per item
  std::vector<MatroidPtr> feasibility;

  int num_items() const { return static_cast<int>(values.size()); }
  int num_bidders() const { return static_cast<int>(bidders.size()); }
  // Throws InputError on a malformed partition, finite value distributions or
  // size mismatches, and on non-regular distributions.
  void Validate() const;
};

struct MechanismOptions {
  // Fresh virtual-value draws behind every threshold.
  int inner_samples = 4000;
  std::uint64_t seed = 1;
  std::size_t table_cap = kDefaultTableCap;
};

// Shared pricing state: the feasibility constraints (plus the one-item-per-
// bidder partition when needed) and the balanced policy on clipped virtual
// values.
class PostedPrices {
 public:
  PostedPrices(BMUMDInstance instance, const MechanismOptions& options);

  const BMUMDInstance& instance() const { return instance_; }
  const std::vector<MatroidPtr>& constraints() const { return constraints_; }
  const BalancedPolicy& policy() const { return *policy_; }
  bool added_bidder_partition() const { return added_partition_; }
  double alpha() const { return policy_->alpha(); }
  int bidder_of(Element x) const { return bidder_of_[x]; }
  std::size_t table_cap() const { return table_cap_; }

  double Threshold(const ElementSet& a, Element x) const;
  // phi^{-1}(T(A, x)), or infinity when A + x is infeasible.
  double Price(const ElementSet& a, Element x) const;

 private:
  BMUMDInstance instance_;
  std::vector<MatroidPtr> constraints_;
  std::shared_ptr<BalancedPolicy> policy_;
  std::vector<int> bidder_of_;
  bool added_partition_ = false;
  std::size_t table_cap_;
};

struct MechanismOutcome {
  ElementSet allocation;
  std::vector<double> payments;  // per bidder
  std::vector<double> prices;    // per item, as posted
  double revenue = 0;
  double virtual_surplus = 0;
  std::vector<Element> ordering;     // copies mechanism only
  ElementSet prophet_selection;      // copies mechanism only
};

MechanismOutcome RunMechanismM(const PostedPrices& prices,
                               const std::vector<double>& bids);

// V(A, i): expected revenue from bidders i+1..n given allocation A after the
// first i bidders, with the revenue-minimizing order of J_{i+1}.
class DPTable {
 public:
  struct Entry {
    double value = 0;
    std::vector<Element> order;  // J_{i+1} sorted by p_x + V(A + x, i + 1)
    std::vector<double> prices;  // aligned with order
  };

  int num_bidders() const { return static_cast<int>(levels_.size()) - 1; }
  std::size_t size() const;
  bool Contains(const ElementSet& a, int i) const;
  const Entry& At(const ElementSet& a, int i) const;
  double Value(const ElementSet& a, int i) const { return At(a, i).value; }
  // Feasible allocations reachable after i bidders.
  std::vector<ElementSet> States(int i) const;

 private:
  friend DPTable BuildAdversaryDP(const PostedPrices& prices);
  std::vector<std::unordered_map<ElementSet, Entry, ElementSetHash>> levels_;
};

DPTable BuildAdversaryDP(const PostedPrices& prices);

MechanismOutcome RunMechanismCopies(const PostedPrices& prices,
                                    const DPTable& table,
                                    const std::vector<double>& bids);

// Revenue of the copies mechanism from bidders i+1..n, starting at
// allocation A after i bidders.
double CopiesRevenueFrom(const PostedPrices& prices, const DPTable& table,
                         const ElementSet& a, int i,
                         const std::vector<double>& bids);

struct RevenueStats {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Estimate r_m;
  Estimate r_copies;
  Estimate phi_copies;
  Estimate phi_opt_copies;
  Estimate m_minus_copies;              // paired R_M - R_copies
  // Paired Phi_copies - g * Phi_opt, g the guarantee factor for p and alpha.
  Estimate phi_copies_minus_bound;
  double dp_value = 0;                  // V(empty, 0)
  std::size_t allocation_mismatches = 0;  // copies vs prophet selection
  std::size_t infeasible_allocations = 0;
};

RevenueStats ComputeRevenueStats(const PostedPrices& prices,
                                 const DPTable& table, std::size_t trials,
                                 std::uint64_t seed, int workers = 0);

inline constexpr const char* kRevenueCsvHeader =
    "R_M,R_copies,Phi_copies,Phi_optCopies,R_M_stderr,R_copies_stderr,"
    "Phi_copies_stderr,Phi_optCopies_stderr,trials,seed";
std::string RevenueCsvRow(const RevenueStats& stats);
std::string RevenueJson(const RevenueStats& stats);

// Two bidders with two items each, values uniform(0, 1), 1-uniform
// feasibility over the four items.
BMUMDInstance TwoByTwoUniform();

}  // namespace prophet

#endif  // PROPHET_MECHANISM_H_
