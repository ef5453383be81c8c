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

#include "doctest.h"
#include "prophet/errors.h"
#include "prophet/instance.h"
#include "prophet/policy.h"
#include "prophet/properties.h"

namespace prophet {
namespace {

void CheckAllPassed(const PropertyReport& report) {
  for (const PropertyResult& r : report.results) {
    CAPTURE(report.instance);
    CAPTURE(r.name);
    CAPTURE(r.witness);
    CHECK(r.passed);
  }
}

TEST_SUITE("properties") {

TEST_CASE("guarantee factor") {
  CHECK(GuaranteeFactor(1, 2) == 0.5);
  CHECK(GuaranteeFactor(2, 4) == doctest::Approx(1.0 / 6));
  CHECK(GuaranteeFactor(2, 4) == doctest::Approx(1.0 / (4 * 2 - 2)));
  CHECK(GuaranteeFactor(3, 6) == doctest::Approx(1.0 / 10));
}

TEST_CASE("suite passes on the small examples") {
  const PropertyReport uniform = RunPropertySuite(UniformExample());
  CheckAllPassed(uniform);
  CHECK(uniform.AllPassed());
  const PropertyReport triangle = RunPropertySuite(TriangleInstance());
  CheckAllPassed(triangle);
  for (const char* name :
       {"matroid_axioms", "max_weight_optimality", "remainder_partition",
        "threshold_identity", "submodularity", "rejected_set_bound",
        "feasibility", "telescoping", "balanced_alpha_beta", "intersection_steps",
        "monotonicity_replay", "approximation_ratio"}) {
    const PropertyResult* r = triangle.Find(name);
    REQUIRE_MESSAGE(r != nullptr, name);
    CHECK(r->checks > 0);
  }
}

TEST_CASE("suite passes on the corpus") {
  for (const Instance& inst : MatroidCorpus(1)) CheckAllPassed(RunPropertySuite(inst));
}

TEST_CASE("suite passes on intersections") {
  CheckAllPassed(RunPropertySuite(GenIntersectionTight(2)));
  RandomStream stream(13);
  for (int k = 0; k < 4; ++k) {
    CheckAllPassed(RunPropertySuite(RandomIntersectionInstance(stream)));
  }
  PropertyOptions optimal;
  optimal.alpha = OptimalAlpha(2);
  CheckAllPassed(RunPropertySuite(GenIntersectionTight(2), optimal));
}

TEST_CASE("halved thresholds are caught") {
  PropertyOptions mutant;
  mutant.threshold_scale = 0.5;
  for (const Instance& inst : {UniformExample(), TriangleInstance()}) {
    const PropertyReport report = RunPropertySuite(inst, mutant);
    CHECK_FALSE(report.AllPassed());
    const PropertyResult* telescoping = report.Find("telescoping");
    REQUIRE(telescoping != nullptr);
    CHECK_FALSE(telescoping->passed);
    CHECK_FALSE(telescoping->witness.empty());
  }
}

TEST_CASE("monotonicity replays") {
  for (const Instance& inst : MatroidCorpus(4)) {
    const auto policy = MakeMatroidBalancedPolicy(inst.matroids[0], inst.profile,
                                                  Estimator::Exact());
    const PropertyResult r = MonotonicityReplays(inst, *policy, 500, 9);
    CAPTURE(inst.name);
    CHECK(r.passed);
    CHECK(r.checks > 0);
  }
}

TEST_CASE("suite refuses large instances") {
  CHECK_THROWS_AS(RunPropertySuite(GenIntersectionTight(3)), RefusedError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace prophet
