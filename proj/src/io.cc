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

#include "prophet/io.h"

#include <fstream>
#include <sstream>

#include "prophet/errors.h"

namespace prophet {

namespace {

const Json& Field(const Json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) {
    throw InputError(context + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

template <typename T>
T Get(const Json& obj, const char* key, const std::string& context) {
  try {
    return Field(obj, key, context).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(context + ": bad \"" + key + "\": " + e.what());
  }
}

std::vector<ElementSet> SetsFrom(const std::vector<std::vector<int>>& lists) {
  std::vector<ElementSet> sets;
  for (const auto& list : lists) {
    ElementSet s;
    for (int x : list) {
      if (x < 0) throw InputError("negative element id");
      s.Insert(x);
    }
    sets.push_back(s);
  }
  return sets;
}

}  // namespace

void RequireKnownKeys(const Json& obj, std::initializer_list<const char*> allowed,
                      const std::string& context) {
  if (!obj.is_object()) throw InputError(context + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw InputError(context + ": unknown key \"" + key + "\"");
  }
}

MatroidPtr MatroidFromJson(const Json& j) {
  const std::string ctx = "matroid";
  if (!j.is_object()) throw InputError(ctx + ": expected an object");
  const std::string family = Get<std::string>(j, "family", ctx);
  if (family == "uniform") {
    RequireKnownKeys(j, {"family", "n", "k"}, ctx);
    return MakeUniform(Get<int>(j, "n", ctx), Get<int>(j, "k", ctx));
  }
  if (family == "partition") {
    RequireKnownKeys(j, {"family", "n", "blocks", "capacities"}, ctx);
    return MakePartition(Get<int>(j, "n", ctx),
                         Get<std::vector<std::vector<int>>>(j, "blocks", ctx),
                         Get<std::vector<int>>(j, "capacities", ctx));
  }
  if (family == "graphic") {
    RequireKnownKeys(j, {"family", "vertices", "edges"}, ctx);
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : Get<std::vector<std::vector<int>>>(j, "edges", ctx)) {
      if (e.size() != 2) throw InputError(ctx + ": edges are [u, v] pairs");
      edges.emplace_back(e[0], e[1]);
    }
    return MakeGraphic(Get<int>(j, "vertices", ctx), edges);
  }
  if (family == "explicit") {
    RequireKnownKeys(j, {"family", "n", "independent_sets"}, ctx);
    return MakeExplicit(
        Get<int>(j, "n", ctx),
        SetsFrom(Get<std::vector<std::vector<int>>>(j, "independent_sets", ctx)));
  }
  throw InputError(ctx + ": unknown family \"" + family + "\"");
}

WeightDistribution ParseBernoulliShorthand(const std::string& text) {
  const std::string prefix = "bernoulli:";
  if (text.rfind(prefix, 0) != 0) {
    throw InputError("unknown distribution shorthand \"" + text + "\"");
  }
  std::istringstream in(text.substr(prefix.size()));
  double v = 0;
  double p = 0;
  char comma = 0;
  if (!(in >> v >> comma >> p) || comma != ',' || !(in >> std::ws).eof()) {
    throw InputError("expected bernoulli:v,p, got \"" + text + "\"");
  }
  return WeightDistribution::Bernoulli(v, p);
}

WeightDistribution DistributionFromJson(const Json& j) {
  if (j.is_string()) return ParseBernoulliShorthand(j.get<std::string>());
  const std::string ctx = "distribution";
  if (!j.is_object()) throw InputError(ctx + ": expected an object or string");
  const std::string kind = Get<std::string>(j, "kind", ctx);
  if (kind == "point_mass") {
    RequireKnownKeys(j, {"kind", "value"}, ctx);
    return WeightDistribution::PointMass(Get<double>(j, "value", ctx));
  }
  if (kind == "finite_discrete") {
    RequireKnownKeys(j, {"kind", "values", "probs"}, ctx);
    return WeightDistribution::FiniteDiscrete(
        Get<std::vector<double>>(j, "values", ctx),
        Get<std::vector<double>>(j, "probs", ctx));
  }
  if (kind == "bernoulli") {
    RequireKnownKeys(j, {"kind", "value", "p"}, ctx);
    return WeightDistribution::Bernoulli(Get<double>(j, "value", ctx),
                                         Get<double>(j, "p", ctx));
  }
  if (kind == "uniform") {
    RequireKnownKeys(j, {"kind", "a", "b"}, ctx);
    return WeightDistribution::UniformInterval(Get<double>(j, "a", ctx),
                                               Get<double>(j, "b", ctx));
  }
  if (kind == "exponential") {
    RequireKnownKeys(j, {"kind", "rate"}, ctx);
    return WeightDistribution::Exponential(Get<double>(j, "rate", ctx));
  }
  throw InputError(ctx + ": unknown kind \"" + kind + "\"");
}

WeightProfile ProfileFromJson(const Json& j) {
  if (!j.is_array()) throw InputError("profile: expected an array");
  std::vector<WeightDistribution> dists;
  for (const Json& d : j) dists.push_back(DistributionFromJson(d));
  return WeightProfile(std::move(dists));
}

Instance InstanceFromJson(const Json& j) {
  const std::string ctx = "instance";
  if (!j.is_object()) throw InputError(ctx + ": expected an object");
  if (j.contains("generator")) {
    const std::string gen = Get<std::string>(j, "generator", ctx);
    if (gen == "rank_one_tight") {
      RequireKnownKeys(j, {"generator", "n"}, ctx);
      return GenRankOneTight(Get<int>(j, "n", ctx));
    }
    if (gen == "intersection_tight") {
      RequireKnownKeys(j, {"generator", "q"}, ctx);
      return GenIntersectionTight(Get<int>(j, "q", ctx));
    }
    if (gen == "uniform_example") {
      RequireKnownKeys(j, {"generator"}, ctx);
      return UniformExample();
    }
    if (gen == "triangle") {
      RequireKnownKeys(j, {"generator"}, ctx);
      return TriangleInstance();
    }
    throw InputError(ctx + ": unknown generator \"" + gen + "\"");
  }
  RequireKnownKeys(j, {"name", "matroids", "profile", "labels"}, ctx);
  Instance inst;
  inst.name = j.contains("name") ? Get<std::string>(j, "name", ctx) : "instance";
  const Json& ms = Field(j, "matroids", ctx);
  if (!ms.is_array() || ms.empty()) {
    throw InputError(ctx + ": \"matroids\" must be a non-empty array");
  }
  for (const Json& m : ms) inst.matroids.push_back(MatroidFromJson(m));
  inst.profile = ProfileFromJson(Field(j, "profile", ctx));
  if (j.contains("labels")) {
    inst.labels = Get<std::vector<std::string>>(j, "labels", ctx);
  }
  inst.Validate();
  return inst;
}

BMUMDInstance BMUMDFromJson(const Json& j) {
  const std::string ctx = "mechanism instance";
  if (!j.is_object()) throw InputError(ctx + ": expected an object");
  if (j.contains("generator")) {
    RequireKnownKeys(j, {"generator"}, ctx);
    const std::string gen = Get<std::string>(j, "generator", ctx);
    if (gen == "two_by_two_uniform") return TwoByTwoUniform();
    throw InputError(ctx + ": unknown generator \"" + gen + "\"");
  }
  RequireKnownKeys(j, {"name", "bidders", "distributions", "feasibility"}, ctx);
  BMUMDInstance inst;
  inst.name = j.contains("name") ? Get<std::string>(j, "name", ctx) : "mechanism";
  inst.bidders = Get<std::vector<std::vector<int>>>(j, "bidders", ctx);
  const Json& dists = Field(j, "distributions", ctx);
  if (!dists.is_array()) throw InputError(ctx + ": distributions must be an array");
  for (const Json& d : dists) inst.values.push_back(DistributionFromJson(d));
  if (j.contains("feasibility")) {
    for (const Json& m : j.at("feasibility")) {
      inst.feasibility.push_back(MatroidFromJson(m));
    }
  }
  inst.Validate();
  return inst;
}

Json ParseJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace prophet
