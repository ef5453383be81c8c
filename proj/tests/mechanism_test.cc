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

#include <cmath>

#include "doctest.h"
#include "prophet/errors.h"
#include "prophet/mechanism.h"

namespace prophet {
namespace {

BMUMDInstance SingleItem() {
  BMUMDInstance inst;
  inst.name = "single";
  inst.bidders = {{0}};
  inst.values = {WeightDistribution::UniformInterval(0, 1)};
  inst.feasibility = {MakeUniform(1, 1)};
  return inst;
}

MechanismOptions Options(int inner = 20000) {
  MechanismOptions options;
  options.inner_samples = inner;
  options.seed = 5;
  return options;
}

TEST_SUITE("mechanism") {

TEST_CASE("virtual values") {
  const WeightDistribution u = WeightDistribution::UniformInterval(0, 1);
  for (double v : {0.0, 0.25, 0.5, 1.0}) CHECK(VirtualValue(u, v) == 2 * v - 1);
  for (double t : {-1.0, 0.0, 0.5, 1.0}) CHECK(InverseVirtual(u, t) == (t + 1) / 2);
  CHECK(InverseVirtual(u, -3) == 0);
  CHECK(std::isinf(InverseVirtual(u, 1.5)));
  const WeightDistribution e = WeightDistribution::Exponential(2);
  for (double v : {0.0, 1.0, 3.0}) {
    CHECK(VirtualValue(e, v) == doctest::Approx(v - 0.5));
    CHECK(InverseVirtual(e, VirtualValue(e, v)) == doctest::Approx(v));
  }
  CHECK_THROWS_AS(VirtualValue(WeightDistribution::PointMass(1), 1), InputError);
}

TEST_CASE("regularity") {
  CHECK(RegularityCheck(WeightDistribution::UniformInterval(0, 1), 64));
  CHECK(RegularityCheck(WeightDistribution::Exponential(1), 64));
  CHECK(RegularityCheck(WeightDistribution::UniformInterval(2, 3), 1));
}

TEST_CASE("instance validation") {
  BMUMDInstance bad = SingleItem();
  bad.values = {WeightDistribution::PointMass(1)};
  CHECK_THROWS_AS(bad.Validate(), InputError);
  BMUMDInstance orphan = SingleItem();
  orphan.bidders = {};
  CHECK_THROWS_AS(orphan.Validate(), InputError);
  TwoByTwoUniform().Validate();
}

TEST_CASE("single bidder, single item") {
  const PostedPrices prices(SingleItem(), Options());
  // T = E[max(2v - 1, 0)] / 2 = 1/8.
  const double t = prices.Threshold({}, 0);
  CHECK(t == doctest::Approx(0.125).epsilon(0.03));
  const double p = prices.Price({}, 0);
  CHECK(p == (t + 1) / 2);

  const MechanismOutcome high = RunMechanismM(prices, {0.9});
  CHECK(high.allocation == ElementSet{0});
  CHECK(high.revenue == p);
  const MechanismOutcome low = RunMechanismM(prices, {0.0});
  CHECK(low.allocation.Empty());
  CHECK(low.revenue == 0);

  const DPTable table = BuildAdversaryDP(prices);
  CHECK(table.Value({}, 1) == 0);
  CHECK(table.Value({0}, 1) == 0);
  CHECK(table.Value({}, 0) == doctest::Approx((1 - p) * p).epsilon(1e-12));

  for (double bid : {0.1, 0.55, 0.6, 0.99}) {
    const MechanismOutcome copies = RunMechanismCopies(prices, table, {bid});
    CHECK(copies.allocation == copies.prophet_selection);
    CHECK(copies.allocation == RunMechanismM(prices, {bid}).allocation);
  }
}

TEST_CASE("infeasible items get no allocation") {
  BMUMDInstance inst = SingleItem();
  inst.bidders = {{0}, {1}};
  inst.values.assign(2, WeightDistribution::UniformInterval(0, 1));
  inst.feasibility = {MakeUniform(2, 1)};
  const PostedPrices prices(inst, Options(2000));
  const MechanismOutcome out = RunMechanismM(prices, {1.0, 1.0});
  CHECK(out.allocation == ElementSet{0});
  CHECK(std::isinf(prices.Price({0}, 1)));
  CHECK(out.payments[1] == 0);
}

TEST_CASE("dp orders symmetric items by identifier") {
  BMUMDInstance inst = SingleItem();
  inst.bidders = {{0, 1}};
  inst.values.assign(2, WeightDistribution::UniformInterval(0, 1));
  inst.feasibility = {MakeUniform(2, 1)};
  const PostedPrices prices(inst, Options(2000));
  CHECK(prices.added_bidder_partition() == false);
  const DPTable table = BuildAdversaryDP(prices);
  const DPTable::Entry& root = table.At({}, 0);
  REQUIRE(root.order.size() == 2);
  // Common random numbers give both items one threshold.
  CHECK(root.prices[0] == root.prices[1]);
  CHECK(root.order == std::vector<Element>{0, 1});
}

TEST_CASE("bidder partition is added when a bidder could win two items") {
  BMUMDInstance inst = TwoByTwoUniform();
  inst.feasibility = {MakeUniform(4, 2)};
  const PostedPrices prices(inst, Options(2000));
  CHECK(prices.added_bidder_partition());
  CHECK(prices.constraints().size() == 2);
  CHECK(prices.alpha() == 4);
  CHECK_FALSE(PostedPrices(TwoByTwoUniform(), Options(2000)).added_bidder_partition());
}

TEST_CASE("own bids do not move own prices") {
  const PostedPrices prices(TwoByTwoUniform(), Options(4000));
  const MechanismOutcome a = RunMechanismM(prices, {0.9, 0.1, 0.2, 0.3});
  const MechanismOutcome b = RunMechanismM(prices, {0.1, 0.95, 0.2, 0.3});
  CHECK(a.prices[0] == b.prices[0]);
  CHECK(a.prices[1] == b.prices[1]);
  CHECK(a.prices[0] == prices.Price({}, 0));
}

TEST_CASE("all bids at the support minimum") {
  const PostedPrices prices(TwoByTwoUniform(), Options(2000));
  const DPTable table = BuildAdversaryDP(prices);
  const MechanismOutcome m = RunMechanismM(prices, {0, 0, 0, 0});
  CHECK(m.allocation.Empty());
  CHECK(m.revenue == 0);
  const MechanismOutcome c = RunMechanismCopies(prices, table, {0, 0, 0, 0});
  CHECK(c.allocation.Empty());
  CHECK(c.revenue == 0);
}

TEST_CASE("copies revenue matches the dp value") {
  const PostedPrices prices(TwoByTwoUniform(), Options(4000));
  const DPTable table = BuildAdversaryDP(prices);
  const std::size_t trials = 100000;
  RandomStream stream(123);
  double sum = 0;
  double sum_sq = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> bids(4);
    for (double& b : bids) b = stream.Uniform01();
    const double r = CopiesRevenueFrom(prices, table, {}, 0, bids);
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum_sq / trials - mean * mean) / (trials - 1));
  CHECK(std::abs(mean - table.Value({}, 0)) <= 3 * se);
}

TEST_CASE("revenue chain on the intersection variant") {
  BMUMDInstance inst = TwoByTwoUniform();
  inst.feasibility = {MakeUniform(4, 2)};
  const PostedPrices prices(inst, Options(4000));
  const DPTable table = BuildAdversaryDP(prices);
  const RevenueStats stats = ComputeRevenueStats(prices, table, 20000, 3, 1);
  CHECK(stats.phi_copies_minus_bound.mean ==
        doctest::Approx(stats.phi_copies.mean - stats.phi_opt_copies.mean / 6));
  CHECK(stats.phi_copies_minus_bound.mean >=
        -3 * stats.phi_copies_minus_bound.std_error);
  CHECK(stats.allocation_mismatches == 0);
  CHECK(stats.infeasible_allocations == 0);
}

TEST_CASE("table cap") {
  MechanismOptions options = Options(500);
  options.table_cap = 2;
  const PostedPrices prices(TwoByTwoUniform(), options);
  CHECK_THROWS_AS(BuildAdversaryDP(prices), RefusedError);
}

TEST_CASE("revenue csv") {
  const PostedPrices prices(TwoByTwoUniform(), Options(2000));
  const DPTable table = BuildAdversaryDP(prices);
  const RevenueStats a = ComputeRevenueStats(prices, table, 2000, 8, 1);
  const RevenueStats b = ComputeRevenueStats(prices, table, 2000, 8, 2);
  CHECK(RevenueCsvRow(a) == RevenueCsvRow(b));
}

}  // TEST_SUITE

}  // namespace
}  // namespace prophet
