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

#ifndef PROPHET_IO_H_
#define PROPHET_IO_H_

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "prophet/instance.h"
#include "prophet/matroid.h"
#include "prophet/mechanism.h"
#include "prophet/weights.h"

namespace prophet {

using Json = nlohmann::json;

// Throws InputError naming the first key of obj outside allowed.
void RequireKnownKeys(const Json& obj, std::initializer_list<const char*> allowed,
                      const std::string& context);

// {"family": "uniform", "n", "k"}
// {"family": "partition", "n", "blocks": [[ids]], "capacities": [ints]}
// {"family": "graphic", "vertices", "edges": [[u, v]]}
// {"family": "explicit", "n", "independent_sets": [[ids]]}
MatroidPtr MatroidFromJson(const Json& j);

// {"kind": "point_mass", "value"}, {"kind": "finite_discrete", "values",
// "probs"}, {"kind": "bernoulli", "value", "p"}, {"kind": "uniform", "a", "b"},
// {"kind": "exponential", "rate"}, or the string "bernoulli:v,p".
WeightDistribution DistributionFromJson(const Json& j);
WeightDistribution ParseBernoulliShorthand(const std::string& text);
WeightProfile ProfileFromJson(const Json& j);

// Either {"name", "matroids": [...], "profile": [...], "labels"} or a
// generator {"generator": "rank_one_tight", "n"},
// {"generator": "intersection_tight", "q"}, {"generator": "uniform_example"},
// {"generator": "triangle"}.
Instance InstanceFromJson(const Json& j);

// {"name", "bidders": [[ids]], "distributions": [...], "feasibility": [...]}
// or {"generator": "two_by_two_uniform"}.
BMUMDInstance BMUMDFromJson(const Json& j);

Json ParseJsonFile(const std::string& path);

}  // namespace prophet

#endif  // PROPHET_IO_H_
