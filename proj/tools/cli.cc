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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "prophet/errors.h"
#include "prophet/harness.h"
#include "prophet/instance.h"
#include "prophet/io.h"
#include "prophet/mechanism.h"
#include "prophet/policy.h"
#include "prophet/properties.h"

namespace prophet::cli {

namespace {

struct CommonFlags {
  std::string config;
  std::string out_dir = ".";
  std::string format = "csv";
  int workers = 0;
  std::optional<std::uint64_t> seed;
};

// Per-purpose seeds derived from the one experiment seed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t tag) {
  return SplitMix64(seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
}

Json LoadConfig(const CommonFlags& flags) {
  if (flags.config.empty()) return Json::object();
  Json config = ParseJsonFile(flags.config);
  if (!config.is_object()) throw InputError("config must be a JSON object");
  return config;
}

std::uint64_t ResolveSeed(const CommonFlags& flags, const Json& config) {
  if (flags.seed) return *flags.seed;
  if (!config.contains("seed")) {
    throw InputError("a seed is required (config \"seed\" or --seed)");
  }
  try {
    return config.at("seed").get<std::uint64_t>();
  } catch (const Json::exception&) {
    throw InputError("\"seed\" must be a non-negative integer");
  }
}

int ResolveWorkerFlag(const CommonFlags& flags, const Json& config) {
  if (flags.workers > 0) return flags.workers;
  if (config.contains("workers")) return config.at("workers").get<int>();
  return 0;
}

std::vector<Json> AsList(const Json& config, const char* one, const char* many) {
  std::vector<Json> items;
  if (config.contains(one)) items.push_back(config.at(one));
  if (config.contains(many)) {
    if (!config.at(many).is_array()) {
      throw InputError(std::string("\"") + many + "\" must be an array");
    }
    for (const Json& j : config.at(many)) items.push_back(j);
  }
  return items;
}

Estimator EstimatorFromJson(const Json& j, std::uint64_t seed) {
  if (j.is_string()) {
    if (j.get<std::string>() == "exact") return Estimator::Exact();
    throw InputError("estimator must be \"exact\" or an object");
  }
  RequireKnownKeys(j, {"mode", "samples", "common_random_numbers"}, "estimator");
  const std::string mode = j.value("mode", "exact");
  if (mode == "exact") return Estimator::Exact();
  if (mode != "monte_carlo") throw InputError("unknown estimator mode " + mode);
  const int samples = j.value("samples", 2000);
  if (samples < 1) throw InputError("estimator samples must be >= 1");
  return Estimator::MonteCarlo(samples, seed,
                               j.value("common_random_numbers", true));
}

PolicyPtr PolicyFromJson(const Json& j, const Instance& inst,
                         const Estimator& estimator) {
  Json desc = j.is_string() ? Json{{"kind", j.get<std::string>()}} : j;
  RequireKnownKeys(desc, {"kind", "alpha", "threshold_scale"}, "policy");
  const std::string kind = desc.value("kind", "");
  const int p = inst.num_matroids();
  PolicyPtr policy;
  if (kind == "matroid_balanced") {
    if (p != 1) throw InputError("matroid_balanced needs exactly one matroid");
    policy = MakeMatroidBalancedPolicy(inst.matroids[0], inst.profile, estimator);
  } else if (kind == "intersection_balanced") {
    double alpha = 2.0 * p;
    if (desc.contains("alpha")) {
      if (desc.at("alpha").is_string() && desc.at("alpha") == "optimal") {
        alpha = OptimalAlpha(p);
      } else {
        alpha = desc.at("alpha").get<double>();
      }
    }
    if (!(alpha > 1)) throw InputError("alpha must exceed 1");
    policy = MakeIntersectionBalancedPolicy(inst.matroids, inst.profile, alpha,
                                            estimator);
  } else if (kind == "rank_one_half_max") {
    policy = MakeRankOneHalfMaxPolicy(inst.matroids, inst.profile, estimator);
  } else if (kind == "samuel_cahn_median") {
    policy = MakeSamuelCahnPolicy(inst.matroids, inst.profile);
  } else {
    throw InputError("unknown policy kind \"" + kind + "\"");
  }
  const double scale = desc.value("threshold_scale", 1.0);
  if (scale != 1.0) policy = std::make_shared<ScaledPolicy>(policy, scale);
  return policy;
}

Adversary AdversaryFromJson(const Json& j) {
  Json desc = j.is_string() ? Json{{"kind", j.get<std::string>()}} : j;
  RequireKnownKeys(desc, {"kind", "order"}, "adversary");
  const std::string kind = desc.value("kind", "");
  if (kind == "fixed") {
    return Adversary::Fixed(desc.value("order", std::vector<Element>{}));
  }
  if (desc.contains("order")) throw InputError("order applies to fixed only");
  if (kind == "uniform_random") return Adversary::UniformRandom();
  if (kind == "greedy_adaptive") return Adversary::GreedyAdaptive();
  if (kind == "worst_case") return Adversary::WorstCase();
  throw InputError("unknown adversary kind \"" + kind + "\"");
}

void Emit(const CommonFlags& flags, const std::string& stem,
          const std::string& contents, std::ostream& out) {
  WriteAtomically(flags.out_dir, stem + "." + flags.format, contents);
  out << contents;
}

std::string SimulationTable(const std::vector<SimulationReport>& reports,
                            const std::string& format) {
  if (format == "json") return SimulationJson(reports);
  std::string text = std::string(kSimulationCsvHeader) + "\n";
  for (const SimulationReport& r : reports) text += SimulationCsvRow(r) + "\n";
  return text;
}

int CmdSimulate(const CommonFlags& flags, std::ostream& out) {
  const Json config = LoadConfig(flags);
  RequireKnownKeys(config,
                   {"seed", "instance", "instances", "policy", "estimator",
                    "adversary", "adversaries", "simulation", "workers"},
                   "simulate config");
  const std::uint64_t seed = ResolveSeed(flags, config);
  const std::vector<Json> instances = AsList(config, "instance", "instances");
  if (instances.empty()) throw InputError("simulate needs an instance");
  std::vector<Json> adversaries = AsList(config, "adversary", "adversaries");
  if (adversaries.empty()) adversaries.push_back("fixed");

  SimulationOptions options;
  options.workers = ResolveWorkerFlag(flags, config);
  const Json sim = config.value("simulation", Json{{"mode", "exact"}});
  RequireKnownKeys(sim, {"mode", "trials"}, "simulation");
  const std::string mode = sim.value("mode", "exact");
  if (mode == "monte_carlo") {
    const long long trials = sim.value("trials", 0LL);
    if (trials < 1) throw InputError("simulation trials must be >= 1");
    options.estimator =
        Estimator::MonteCarlo(static_cast<int>(trials), seed);
  } else if (mode != "exact") {
    throw InputError("unknown simulation mode " + mode);
  }
  const Estimator policy_estimator = EstimatorFromJson(
      config.value("estimator", Json("exact")), DeriveSeed(seed, 1));

  std::vector<SimulationReport> reports;
  for (const Json& ij : instances) {
    const Instance inst = InstanceFromJson(ij);
    const PolicyPtr policy = PolicyFromJson(
        config.value("policy", Json("intersection_balanced")), inst,
        policy_estimator);
    for (const Json& aj : adversaries) {
      reports.push_back(Simulate(inst, *policy, AdversaryFromJson(aj), options));
    }
  }
  Emit(flags, "simulate", SimulationTable(reports, flags.format), out);
  return kOk;
}

int CmdVerify(const CommonFlags& flags, double mutate, std::ostream& out) {
  const Json config = LoadConfig(flags);
  RequireKnownKeys(config,
                   {"seed", "corpus", "depth", "orders", "alpha",
                    "threshold_scale", "adaptive", "monotonicity_replays",
                    "random_intersections", "workers"},
                   "verify config");
  const std::uint64_t seed = ResolveSeed(flags, config);
  std::vector<Instance> corpus;
  const Json desc = config.value("corpus", Json("builtin"));
  if (desc.is_string()) {
    if (desc.get<std::string>() != "builtin") {
      throw InputError("corpus must be \"builtin\" or a list of instances");
    }
    corpus = MatroidCorpus(seed);
    corpus.push_back(GenIntersectionTight(2));
    RandomStream stream(DeriveSeed(seed, 2));
    const int extra = config.value("random_intersections", 4);
    for (int k = 0; k < extra; ++k) {
      corpus.push_back(RandomIntersectionInstance(stream));
    }
  } else if (desc.is_array()) {
    for (const Json& j : desc) corpus.push_back(InstanceFromJson(j));
  } else {
    throw InputError("corpus must be \"builtin\" or a list of instances");
  }
  if (corpus.empty()) throw InputError("corpus is empty");

  PropertyOptions options;
  options.depth = config.value("depth", std::size_t{0});
  options.orders = config.value("orders", 3);
  options.alpha = config.value("alpha", 0.0);
  options.threshold_scale = config.value("threshold_scale", 1.0);
  if (mutate != 1.0) options.threshold_scale = mutate;
  options.adaptive = config.value("adaptive", true);
  options.seed = DeriveSeed(seed, 3);
  const int replays = config.value("monotonicity_replays", 1000);

  std::vector<PropertyReport> reports;
  bool all = true;
  for (const Instance& inst : corpus) {
    PropertyReport report = RunPropertySuite(inst, options);
    if (replays > 0) {
      const int p = inst.num_matroids();
      PolicyPtr policy = MakeIntersectionBalancedPolicy(
          inst.matroids, inst.profile,
          options.alpha > 0 ? options.alpha : (p == 1 ? 2.0 : 2.0 * p),
          Estimator::Exact());
      if (options.threshold_scale != 1.0) {
        policy = std::make_shared<ScaledPolicy>(policy, options.threshold_scale);
      }
      report.results.push_back(
          MonotonicityReplays(inst, *policy, replays, DeriveSeed(seed, 4)));
    }
    all = all && report.AllPassed();
    reports.push_back(std::move(report));
  }
  std::string text;
  if (flags.format == "json") {
    text = PropertyReportJson(reports);
  } else {
    text = "instance,property,passed,checks,witness\n";
    for (const PropertyReport& r : reports) {
      for (const PropertyResult& p : r.results) {
        std::string witness = p.witness;
        for (char& c : witness) {
          if (c == ',' || c == '\n') c = ';';
        }
        text += r.instance + "," + p.name + "," + (p.passed ? "1" : "0") + "," +
                std::to_string(p.checks) + "," + witness + "\n";
      }
    }
  }
  Emit(flags, "verify", text, out);
  return all ? kOk : kPropertyFailure;
}

int CmdLowerbound(const CommonFlags& flags, int rank1, int q, long long trials,
                  std::ostream& out) {
  if ((rank1 > 0) == (q > 0)) {
    throw InputError("lowerbound needs exactly one of --rank1 or --intersection");
  }
  const Json config = LoadConfig(flags);
  RequireKnownKeys(config, {"seed", "trials", "samples", "workers"},
                   "lowerbound config");
  SimulationOptions exact;
  exact.workers = ResolveWorkerFlag(flags, config);
  std::vector<SimulationReport> reports;
  if (rank1 > 0) {
    const Instance inst = GenRankOneTight(rank1);
    const PolicyPtr half = MakeRankOneHalfMaxPolicy(inst.matroids, inst.profile);
    const PolicyPtr median = MakeSamuelCahnPolicy(inst.matroids, inst.profile);
    const PolicyPtr balanced = MakeMatroidBalancedPolicy(
        inst.matroids[0], inst.profile, Estimator::Exact());
    for (const PolicyPtr& policy : {half, median, balanced}) {
      reports.push_back(Simulate(inst, *policy, Adversary::Fixed({0, 1}), exact));
      reports.push_back(Simulate(inst, *policy, Adversary::WorstCase(), exact));
    }
  } else {
    const Instance inst = GenIntersectionTight(q);
    if (OutcomeCount(inst.profile) <= kMaxOutcomes) {
      const PolicyPtr policy = MakeIntersectionBalancedPolicy(
          inst.matroids, inst.profile, 2.0 * q, Estimator::Exact());
      for (const Adversary& adv :
           {Adversary::Fixed(), Adversary::UniformRandom(),
            Adversary::GreedyAdaptive(), Adversary::WorstCase()}) {
        reports.push_back(Simulate(inst, *policy, adv, exact));
      }
    } else {
      const std::uint64_t seed = ResolveSeed(flags, config);
      if (trials <= 0) trials = config.value("trials", 100000LL);
      const int samples = config.value("samples", 2000);
      const PolicyPtr policy = MakeIntersectionBalancedPolicy(
          inst.matroids, inst.profile, 2.0 * q,
          Estimator::MonteCarlo(samples, DeriveSeed(seed, 1)));
      SimulationOptions mc = exact;
      mc.estimator = Estimator::MonteCarlo(static_cast<int>(trials), seed);
      for (const Adversary& adv :
           {Adversary::Fixed(), Adversary::UniformRandom()}) {
        reports.push_back(Simulate(inst, *policy, adv, mc));
      }
    }
  }
  Emit(flags, "lowerbound", SimulationTable(reports, flags.format), out);
  return kOk;
}

int CmdMechanism(const CommonFlags& flags, std::ostream& out) {
  const Json config = LoadConfig(flags);
  RequireKnownKeys(config,
                   {"seed", "instance", "trials", "inner_samples", "table_cap",
                    "workers"},
                   "mechanism config");
  const std::uint64_t seed = ResolveSeed(flags, config);
  const BMUMDInstance inst = BMUMDFromJson(
      config.value("instance", Json{{"generator", "two_by_two_uniform"}}));
  MechanismOptions options;
  options.inner_samples = config.value("inner_samples", 4000);
  options.table_cap = config.value("table_cap", kDefaultTableCap);
  options.seed = DeriveSeed(seed, 1);
  const long long trials = config.value("trials", 100000LL);
  if (trials < 1) throw InputError("trials must be >= 1");
  const PostedPrices prices(inst, options);
  const DPTable table = BuildAdversaryDP(prices);
  const RevenueStats stats = ComputeRevenueStats(
      prices, table, static_cast<std::size_t>(trials), seed,
      ResolveWorkerFlag(flags, config));
  const std::string text =
      flags.format == "json"
          ? RevenueJson(stats)
          : std::string(kRevenueCsvHeader) + "\n" + RevenueCsvRow(stats) + "\n";
  Emit(flags, "mechanism", text, out);
  return kOk;
}

void AddCommon(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON config file");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--format", flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", flags.workers, "Worker threads");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&flags](const std::uint64_t& s) { flags.seed = s; },
      "Seed (overrides the config)");
}

}  // namespace

void WriteAtomically(const std::string& dir, const std::string& name,
                     const std::string& contents) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path target = fs::path(dir) / name;
  const fs::path temp = fs::path(dir) / ("." + name + ".tmp");
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot write " + temp.string());
    file << contents;
    file.flush();
    if (!file) throw InputError("write failed for " + temp.string());
  }
  fs::rename(temp, target);
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Matroid prophet-inequality experiments"};
  app.require_subcommand(1);
  CommonFlags flags;
  double mutate = 1.0;
  int rank1 = 0;
  int q = 0;
  long long trials = 0;

  CLI::App* simulate = app.add_subcommand("simulate", "Run simulations");
  AddCommon(simulate, flags);
  CLI::App* verify = app.add_subcommand("verify", "Run the property suite");
  AddCommon(verify, flags);
  verify->add_option("--mutate", mutate,
                     "Scale every threshold by this factor (mutation test)");
  CLI::App* lower = app.add_subcommand("lowerbound", "Tight instances");
  AddCommon(lower, flags);
  lower->add_option("--rank1", rank1, "Rank-one instance size n >= 2");
  lower->add_option("--intersection", q, "Intersection instance prime q");
  lower->add_option("--trials", trials, "Monte Carlo trials for q = 3");
  CLI::App* mechanism = app.add_subcommand("mechanism", "Revenue statistics");
  AddCommon(mechanism, flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return CmdSimulate(flags, out);
    if (*verify) return CmdVerify(flags, mutate, out);
    if (*lower) return CmdLowerbound(flags, rank1, q, trials, out);
    if (*mechanism) return CmdMechanism(flags, out);
  } catch (const RefusedError& e) {
    err << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace prophet::cli
