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

#include "prophet/properties.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "prophet/errors.h"
#include "prophet/harness.h"
#include "prophet/remainder.h"

namespace prophet {

namespace {

using Mask = std::uint64_t;

constexpr double kTol = 1e-9;
constexpr std::size_t kMaxSuiteOutcomes = 100'000;
constexpr int kMaxSuiteElements = 16;

Mask Bit(Element x) { return Mask{1} << x; }

std::string ShowWeights(const WeightVector& w) {
  std::ostringstream out;
  out << "w=(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out << ",";
    out << FormatNumber(w[i]);
  }
  out << ")";
  return out.str();
}

std::string ShowSet(Mask m) { return ElementSet::FromMask(m).ToString(); }

std::string ShowOrder(const std::vector<Element>& order) {
  std::string s = "order=(";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(order[i]);
  }
  return s + ")";
}

double MaskWeight(Mask m, const WeightVector& w) {
  double total = 0;
  for (Mask rest = m; rest; rest &= rest - 1) total += w[std::countr_zero(rest)];
  return total;
}

bool Close(double a, double b) {
  return std::abs(a - b) <= kTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Calls fn(sub) for every submask of m, including 0 and m.
template <typename Fn>
void ForSubmasks(Mask m, Fn fn) {
  Mask sub = m;
  for (;;) {
    fn(sub);
    if (sub == 0) return;
    sub = (sub - 1) & m;
  }
}

struct Context {
  explicit Context(const Instance& inst) : instance(inst) {}

  const Instance& instance;
  int n = 0;
  int p = 0;
  double alpha = 2;
  std::shared_ptr<BalancedPolicy> reference;
  PolicyPtr tested;
  std::vector<std::size_t> visit;
  bool visits_all = true;
  std::vector<std::vector<char>> independent;  // per matroid, by mask
  std::vector<char> feasible;                  // all matroids, by mask
  std::vector<Mask> feasible_masks;

  const RemainderOracle& oracle() const { return reference->oracle(); }
  const SampleBank& bank() const { return oracle().bank(); }
};

PropertyResult MatroidAxioms(const Context& ctx) {
  PropertyResult res{"matroid_axioms"};
  const int n = ctx.n;
  const Mask full = Bit(n) - 1;
  for (int j = 0; j < ctx.p; ++j) {
    const Matroid& m = *ctx.instance.matroids[j];
    const std::vector<char>& ind = ctx.independent[j];
    const std::string tag = "matroid " + std::to_string(j) + ": ";
    if (!ind[0]) res.Fail(tag + "empty set dependent");
    std::vector<Mask> sets;
    for (Mask s = 0; s <= full; ++s) {
      if (!ind[s]) continue;
      sets.push_back(s);
      for (Mask rest = s; rest; rest &= rest - 1) {
        ++res.checks;
        if (!ind[s & ~(rest & -rest)]) {
          res.Fail(tag + "not downward closed at " + ShowSet(s));
        }
      }
    }
    if (n <= 12) {
      for (Mask i : sets) {
        for (Mask jset : sets) {
          if (std::popcount(i) >= std::popcount(jset)) continue;
          ++res.checks;
          bool found = false;
          for (Mask rest = jset & ~i; rest && !found; rest &= rest - 1) {
            found = ind[i | (rest & -rest)];
          }
          if (!found) {
            res.Fail(tag + "exchange fails for I=" + ShowSet(i) +
                     " J=" + ShowSet(jset));
          }
        }
      }
    }
    if (n > 10) {
      res.note = "rank and view checks skipped above 10 elements";
      continue;
    }
    // Rank as the largest independent subset, by dynamic programming.
    std::vector<int> rank(full + 1, 0);
    for (Mask s = 1; s <= full; ++s) {
      if (ind[s]) {
        rank[s] = std::popcount(s);
        continue;
      }
      for (Mask rest = s; rest; rest &= rest - 1) {
        rank[s] = std::max(rank[s], rank[s & ~(rest & -rest)]);
      }
    }
    for (Mask s = 0; s <= full; ++s) {
      const ElementSet set = ElementSet::FromMask(s);
      ++res.checks;
      if (Rank(m, set) != rank[s]) res.Fail(tag + "rank mismatch at " + ShowSet(s));
      Mask closure = 0;
      for (Element x = 0; x < n; ++x) {
        if (rank[s | Bit(x)] == rank[s]) closure |= Bit(x);
      }
      ++res.checks;
      if (Closure(m, set).Mask() != closure) {
        res.Fail(tag + "closure mismatch at " + ShowSet(s));
      }
      for (Element x = 0; x < n; ++x) {
        if (rank[s | Bit(x)] < rank[s]) res.Fail(tag + "rank not monotone");
      }
    }
    if (n <= 8) {
      for (Mask s = 0; s <= full; ++s) {
        for (Mask t = s; t <= full; ++t) {
          ++res.checks;
          if (rank[s | t] + rank[s & t] > rank[s] + rank[t]) {
            res.Fail(tag + "rank not submodular at S=" + ShowSet(s) +
                     " T=" + ShowSet(t));
          }
        }
      }
    }
    // Contraction and deletion views against reconstruction from rank.
    for (Mask s = 0; s <= full; ++s) {
      if (std::popcount(s) > 2) continue;
      const ElementSet set = ElementSet::FromMask(s);
      const MatroidPtr base = ctx.instance.matroids[j];
      const MatroidPtr contracted = Contract(base, set);
      const MatroidPtr deleted = Delete(base, set);
      ForSubmasks(full & ~s, [&](Mask t) {
        ++res.checks;
        const ElementSet tset = ElementSet::FromMask(t);
        const bool want = rank[t | s] == std::popcount(t) + rank[s];
        if (contracted->IsIndependent(tset) != want) {
          res.Fail(tag + "contraction by " + ShowSet(s) + " wrong at " +
                   ShowSet(t));
        }
        if (deleted->IsIndependent(tset) != static_cast<bool>(ind[t])) {
          res.Fail(tag + "deletion by " + ShowSet(s) + " wrong at " + ShowSet(t));
        }
      });
    }
    // Exchange bijections between pairs of bases.
    std::vector<Mask> bases;
    for (Mask s : sets) {
      if (rank[s] == rank[full]) bases.push_back(s);
    }
    std::size_t pairs = 0;
    for (Mask v : bases) {
      for (Mask r : bases) {
        if (++pairs > 400) break;
        ++res.checks;
        const ElementSet vset = ElementSet::FromMask(v);
        const ElementSet rset = ElementSet::FromMask(r);
        const std::map<Element, Element> phi = ExchangeBijection(m, vset, rset);
        Mask image = 0;
        bool ok = phi.size() == static_cast<std::size_t>(std::popcount(v));
        for (const auto& [from, to] : phi) {
          ok = ok && vset.Contains(from) && rset.Contains(to);
          image |= Bit(to);
          ok = ok && ind[(r & ~Bit(to)) | Bit(from)];
        }
        if (!ok || image != r) {
          res.Fail(tag + "bad exchange bijection V=" + ShowSet(v) +
                   " R=" + ShowSet(r));
        }
      }
    }
  }
  return res;
}

PropertyResult MaxWeightOptimality(const Context& ctx) {
  PropertyResult res{"max_weight_optimality"};
  const int n = ctx.n;
  for (std::size_t k : ctx.visit) {
    const WeightVector& w = ctx.bank()[k].weights;
    double best = 0;
    std::vector<Element> lex_first;
    bool have = false;
    Mask positive = 0;
    for (Element x = 0; x < n; ++x) {
      if (w[x] > 0) positive |= Bit(x);
    }
    for (Mask s : ctx.feasible_masks) {
      const double value = MaskWeight(s, w);
      if ((s & ~positive) != 0) continue;
      const std::vector<Element> list = ElementSet::FromMask(s).Elements();
      if (!have || value > best || (value == best && list < lex_first)) {
        best = value;
        lex_first = list;
        have = true;
      }
    }
    ++res.checks;
    const ElementSet found =
        MaxWeightFeasibleIntersection(ctx.instance.matroids, w);
    // One matroid uses the greedy basis, whose ties follow the weight order.
    const bool tie_ok = ctx.p == 1
                            ? found == MaxWeightBasis(*ctx.instance.matroids[0], w)
                            : found.Elements() == lex_first;
    if (!ctx.feasible[found.Mask()] || SetWeight(found, w) != best || !tie_ok) {
      std::string expected = "(";
      for (Element x : lex_first) expected += " " + std::to_string(x);
      res.Fail("maximizer " + found.ToString() + ", expected" + expected +
               " ) of weight " + FormatNumber(best) + " " + ShowWeights(w));
    }
    if (ctx.p == 1) {
      ++res.checks;
      const Matroid& m = *ctx.instance.matroids[0];
      const ElementSet basis = MaxWeightBasis(m, w);
      const int full_rank = Rank(m, ElementSet::Range(n));
      if (!m.IsIndependent(basis) || basis.Size() != full_rank ||
          SetWeight(basis, w) != best) {
        res.Fail("greedy basis " + basis.ToString() + " not optimal, " +
                 ShowWeights(w));
      }
    }
  }
  return res;
}

PropertyResult RemainderPartition(const Context& ctx) {
  PropertyResult res{"remainder_partition"};
  const auto& matroids = ctx.instance.matroids;
  for (std::size_t k : ctx.visit) {
    const WeightVector& w = ctx.bank()[k].weights;
    for (Mask a : ctx.feasible_masks) {
      const ElementSet aset = ElementSet::FromMask(a);
      const std::string where = "A=" + ShowSet(a) + " " + ShowWeights(w);
      if (ctx.p == 1) {
        const RemainderResult r = Remainder(matroids[0], w, aset);
        const Mask b = r.base.Mask();
        const std::vector<char>& ind = ctx.independent[0];
        int full_rank = 0;
        for (Mask s : ctx.feasible_masks) full_rank = std::max(full_rank, std::popcount(s));
        double best = -1;
        ForSubmasks(b & ~a, [&](Mask cand) {
          if (ind[a | cand] && std::popcount(a | cand) == full_rank) {
            best = std::max(best, MaskWeight(cand, w));
          }
        });
        const Mask rm = r.remainder.Mask();
        ++res.checks;
        if (!ind[a | rm] || std::popcount(a | rm) != full_rank ||
            MaskWeight(rm, w) != best) {
          res.Fail("remainder " + r.remainder.ToString() + " not the best partition, " + where);
        }
        ++res.checks;
        if ((rm | r.cost.Mask()) != b || (rm & r.cost.Mask()) != 0 ||
            MaskWeight(rm, w) + MaskWeight(r.cost.Mask(), w) != MaskWeight(b, w)) {
          res.Fail("conservation fails, " + where);
        }
        ++res.checks;
        const double greedy = ctx.oracle().RemainderWeight(k, aset, 0);
        if (greedy != MaskWeight(rm, w)) {
          res.Fail("greedy remainder weight " + FormatNumber(greedy) +
                   " differs from contraction basis, " + where);
        }
      }
      const IntersectionRemainder all = RemainderAll(matroids, w, aset);
      const Mask b = all.base.Mask();
      Mask inter = b;
      Mask uni = 0;
      for (int j = 0; j < ctx.p; ++j) {
        const auto [rj, cj] = RemainderJ(matroids, w, aset, j);
        const Mask r = rj.Mask();
        const std::vector<char>& ind = ctx.independent[j];
        double best = -1;
        ForSubmasks(b & ~a, [&](Mask cand) {
          if (ind[a | cand]) best = std::max(best, MaskWeight(cand, w));
        });
        ++res.checks;
        if (!ind[a | r] || (r & ~b) != 0 || cj.Mask() != (b & ~r) ||
            MaskWeight(r, w) != best) {
          res.Fail("R_" + std::to_string(j) + "=" + rj.ToString() +
                   " not a best remainder, " + where);
        }
        ++res.checks;
        if (!SpansBase(*matroids[j], aset, rj, all.base)) {
          res.Fail("A + R_" + std::to_string(j) + " does not span B, " + where);
        }
        inter &= r;
        uni |= cj.Mask();
      }
      ++res.checks;
      if (all.remainder.Mask() != inter || all.cost.Mask() != uni) {
        res.Fail("R/C are not the intersection/union of R_j/C_j, " + where);
      }
    }
  }
  return res;
}

PropertyResult ThresholdIdentity(const Context& ctx) {
  PropertyResult res{"threshold_identity"};
  if (ctx.p != 1) {
    res.note = "single matroid only";
    return res;
  }
  const RemainderOracle& oracle = ctx.oracle();
  double max_gap = 0;
  int direct = 0;
  for (Mask a : ctx.feasible_masks) {
    const ElementSet aset = ElementSet::FromMask(a);
    for (Element x = 0; x < ctx.n; ++x) {
      if ((a & Bit(x)) || !ctx.feasible[a | Bit(x)]) continue;
      ++res.checks;
      const double via_r = oracle.ExpectedRemainderDrop(aset, x, 0).mean / 2;
      const double via_c = oracle.ExpectedCostRise(aset, x, 0).mean / 2;
      max_gap = std::max(max_gap, std::abs(via_r - via_c));
      if (!Close(via_r, via_c)) {
        res.Fail("A=" + ShowSet(a) + " x=" + std::to_string(x) + ": " +
                 FormatNumber(via_r) + " vs " + FormatNumber(via_c));
      }
      if (direct < 24) {
        ++direct;
        const MatroidPtr& m = ctx.instance.matroids[0];
        const double t1 =
            ThresholdSingle(m, ctx.instance.profile, aset, x, Estimator::Exact());
        const double t2 = ThresholdSingleViaCost(m, ctx.instance.profile, aset,
                                                 x, Estimator::Exact());
        max_gap = std::max(max_gap, std::abs(t1 - t2));
        if (!Close(t1, t2) || !Close(t1, via_r)) {
          res.Fail("direct thresholds disagree at A=" + ShowSet(a) +
                   " x=" + std::to_string(x));
        }
      }
    }
  }
  res.note = "max gap " + FormatNumber(max_gap);
  return res;
}

// f(S) = w'(R(S)) on every feasible S for one outcome.
std::vector<double> RemainderTable(const Context& ctx, std::size_t k) {
  std::vector<double> f(ctx.feasible.size(), 0);
  for (Mask s : ctx.feasible_masks) {
    f[s] = ctx.oracle().RemainderWeight(k, ElementSet::FromMask(s), 0);
  }
  return f;
}

PropertyResult Submodularity(const Context& ctx,
                             const std::vector<std::vector<double>>& tables) {
  PropertyResult res{"submodularity"};
  if (ctx.p != 1) {
    res.note = "single matroid only";
    return res;
  }
  for (std::size_t v = 0; v < ctx.visit.size(); ++v) {
    const std::vector<double>& f = tables[v];
    for (Mask t : ctx.feasible_masks) {
      if (std::popcount(t) < 2 || std::popcount(t) > 6) continue;
      for (Mask rx = t; rx; rx &= rx - 1) {
        const Mask x = rx & -rx;
        for (Mask ry = rx & (rx - 1); ry; ry &= ry - 1) {
          const Mask y = ry & -ry;
          const Mask s = t & ~x & ~y;
          ++res.checks;
          const double lhs = f[s] - f[s | x];
          const double rhs = f[s | y] - f[s | x | y];
          if (lhs > rhs + kTol) {
            res.Fail("S=" + ShowSet(s) + " x=" + ShowSet(x) + " y=" +
                     ShowSet(y) + " " + ShowWeights(ctx.bank()[ctx.visit[v]].weights));
          }
        }
      }
    }
  }
  return res;
}

PropertyResult RejectedSetBound(const Context& ctx,
                                const std::vector<std::vector<double>>& tables) {
  PropertyResult res{"rejected_set_bound"};
  if (ctx.p != 1) {
    res.note = "single matroid only";
    return res;
  }
  for (std::size_t v = 0; v < ctx.visit.size(); ++v) {
    const std::vector<double>& f = tables[v];
    for (Mask u : ctx.feasible_masks) {
      ForSubmasks(u, [&](Mask a) {
        const Mask rejected = u & ~a;
        for (int direction = 0; direction < 2; ++direction) {
          double lhs = 0;
          for (Mask rest = rejected; rest; rest &= rest - 1) {
            const Element x = std::countr_zero(rest);
            // Accepted elements revealed before x.
            const Mask prefix = direction == 0 ? a & (Bit(x) - 1)
                                               : a & ~((Bit(x) << 1) - 1);
            lhs += f[prefix] - f[prefix | Bit(x)];
          }
          ++res.checks;
          if (lhs > f[a] + kTol) {
            res.Fail("A=" + ShowSet(a) + " V=" + ShowSet(rejected) +
                     (direction ? " descending" : " ascending") + " " +
                     ShowWeights(ctx.bank()[ctx.visit[v]].weights));
          }
        }
      });
    }
  }
  return res;
}

// Per-accepted-set expectations over the fresh draw w'.
struct SetExpectations {
  double cost = 0;            // sum_j E[w'(C_j(A))]
  double remainder = 0;       // sum_j E[w'(R_j(A))]
  double joint_remainder = 0;  // E[w'(R(A))], R(A) the intersection of R_j
  std::vector<Mask> joint;    // R(A) per bank sample
};

class TraceChecks {
 public:
  explicit TraceChecks(const Context& ctx)
      : ctx_(ctx),
        feasibility_{"feasibility"},
        telescoping_{"telescoping"},
        balanced_{"balanced_alpha_beta"},
        steps_{"intersection_steps"},
        monotone_{"monotonicity_replay"} {}

  void Run(const std::vector<std::vector<Element>>& orders) {
    const SampleBank& bank = ctx_.bank();
    std::vector<double> step2_lhs(orders.size(), 0);
    std::vector<double> step2_rhs(orders.size(), 0);
    for (std::size_t k : ctx_.visit) {
      const WeightVector& w = bank[k].weights;
      for (std::size_t o = 0; o < orders.size(); ++o) {
        InputSequence seq;
        for (Element x : orders[o]) seq.emplace_back(x, w[x]);
        const SelectionTrace trace = RunPolicy(*ctx_.tested, seq);
        const std::string where = ShowWeights(w) + " " + ShowOrder(orders[o]);
        CheckFeasibility(trace, w, where);
        CheckMonotone(seq, trace, where);
        const auto [gain, fresh_gain] = CheckBalance(trace, where);
        step2_lhs[o] += bank[k].probability * gain;
        step2_rhs[o] += bank[k].probability * fresh_gain;
      }
    }
    if (!ctx_.visits_all) {
      steps_.note = "step 2 needs the full outcome table; skipped";
      return;
    }
    for (std::size_t o = 0; o < orders.size(); ++o) {
      ++steps_.checks;
      if (step2_lhs[o] < step2_rhs[o] - kTol) {
        steps_.Fail("step 2: " + FormatNumber(step2_lhs[o]) + " < " +
                       FormatNumber(step2_rhs[o]) + " " + ShowOrder(orders[o]));
      }
    }
  }

  std::vector<PropertyResult> Results() const {
    return {feasibility_, telescoping_, balanced_, steps_, monotone_};
  }

 private:
  const SetExpectations& Expect(Mask a) {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    const RemainderOracle& oracle = ctx_.oracle();
    const ElementSet aset = ElementSet::FromMask(a);
    SetExpectations e;
    for (int j = 0; j < ctx_.p; ++j) {
      e.cost += oracle.ExpectedCost(aset, j).mean;
      e.remainder += oracle.ExpectedRemainder(aset, j).mean;
    }
    const SampleBank& bank = oracle.bank();
    e.joint.resize(bank.size());
    for (std::size_t k = 0; k < bank.size(); ++k) {
      Mask r = ~Mask{0};
      for (int j = 0; j < ctx_.p; ++j) r &= oracle.RemainderSet(k, aset, j).Mask();
      e.joint[k] = r;
      e.joint_remainder += bank[k].probability * MaskWeight(r, bank[k].weights);
    }
    return cache_.emplace(a, std::move(e)).first->second;
  }

  void CheckFeasibility(const SelectionTrace& trace, const WeightVector& w,
                        const std::string& where) {
    Mask prefix = 0;
    double payoff = 0;
    for (const TraceStep& s : trace.steps) {
      ++feasibility_.checks;
      if (s.accepted != (s.weight >= s.threshold)) {
        feasibility_.Fail("decision disagrees with threshold at " +
                          std::to_string(s.element) + " " + where);
      }
      if (s.accepted) {
        prefix |= Bit(s.element);
        payoff += w[s.element];
        if (!ctx_.feasible[prefix]) {
          feasibility_.Fail("infeasible prefix " + ShowSet(prefix) + " " + where);
        }
      }
    }
    ++feasibility_.checks;
    if (payoff != trace.payoff || prefix != trace.accepted.Mask()) {
      feasibility_.Fail("payoff or accepted set mismatch " + where);
    }
  }

  void CheckMonotone(const InputSequence& seq, const SelectionTrace& trace,
                     const std::string& where) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (!trace.steps[i].accepted) continue;
      for (double raised : {seq[i].second + 1, 2 * seq[i].second + 0.5}) {
        InputSequence changed = seq;
        changed[i].second = raised;
        const SelectionTrace replay = RunPolicy(*ctx_.tested, changed);
        ++monotone_.checks;
        bool same_prefix = true;
        for (std::size_t s = 0; s < i; ++s) {
          same_prefix = same_prefix &&
                        replay.steps[s].accepted == trace.steps[s].accepted;
        }
        if (!replay.steps[i].accepted || !same_prefix) {
          monotone_.Fail("raising element " + std::to_string(seq[i].first) +
                         " to " + FormatNumber(raised) + " flips it, " + where);
        }
      }
    }
  }

  // Returns (sum_A (w_i - T_i)^+, E_w'[sum_{x in R(A)} (w'(x) - T_x)^+]).
  std::pair<double, double> CheckBalance(const SelectionTrace& trace,
                                         const std::string& where) {
    const Mask a = trace.accepted.Mask();
    const SetExpectations& e = Expect(a);
    const double inv_alpha = 1 / ctx_.alpha;
    std::vector<double> threshold(ctx_.n, kInfiniteThreshold);
    double sum_accepted = 0;
    double gain = 0;
    for (const TraceStep& s : trace.steps) {
      threshold[s.element] = s.threshold;
      if (!s.accepted) continue;
      sum_accepted += s.threshold;
      const double surplus = std::max(s.weight - s.threshold, 0.0);
      gain += surplus;
      ++steps_.checks;
      if (s.threshold + surplus != s.weight) {
        steps_.Fail("T + (w - T)^+ != w at " + std::to_string(s.element) +
                       " " + where);
      }
    }

    ++telescoping_.checks;
    if (!Close(sum_accepted, inv_alpha * e.cost)) {
      telescoping_.Fail("sum T = " + FormatNumber(sum_accepted) +
                        ", (1/alpha) E[C] = " + FormatNumber(inv_alpha * e.cost) +
                        " " + where);
    }

    // Alpha side; for intersections this is also step 1.
    ++balanced_.checks;
    if (sum_accepted < inv_alpha * e.cost - kTol * std::max(1.0, sum_accepted)) {
      balanced_.Fail("alpha side: sum T = " + FormatNumber(sum_accepted) +
                     " " + where);
    }
    const double beta_bound =
        (ctx_.p == 1 ? 1 - inv_alpha : inv_alpha) * e.remainder;
    const Mask free = (Bit(ctx_.n) - 1) & ~a;
    Mask worst_v = 0;
    double worst_sum = -1;
    ForSubmasks(free, [&](Mask v) {
      if (!ctx_.feasible[a | v]) return;
      double sum_v = 0;
      for (Mask rest = v; rest; rest &= rest - 1) {
        sum_v += threshold[std::countr_zero(rest)];
      }
      ++balanced_.checks;
      if (sum_v > beta_bound + kTol * std::max(1.0, sum_v)) {
        balanced_.Fail("beta side: V=" + ShowSet(v) + " sum T = " +
                       FormatNumber(sum_v) + " > " + FormatNumber(beta_bound) +
                       " " + where);
      }
      if (sum_v > worst_sum) {
        worst_sum = sum_v;
        worst_v = v;
      }
    });
    // The library verdict must agree with the direct evaluation.
    const BalanceVerdict verdict = CheckBalanced(
        *ctx_.reference, trace, ElementSet::FromMask(worst_v), kTol);
    const bool direct_beta =
        worst_sum <= beta_bound + kTol * std::max(1.0, worst_sum);
    ++balanced_.checks;
    if (verdict.beta_holds != direct_beta) {
      balanced_.Fail("CheckBalanced disagrees on V=" + ShowSet(worst_v) + " " +
                     where);
    }

    // Step 3 with V = R(A), averaged over the fresh draw.
    const SampleBank& bank = ctx_.bank();
    double fresh_gain = 0;
    for (std::size_t k = 0; k < bank.size(); ++k) {
      double total = 0;
      for (Mask rest = e.joint[k]; rest; rest &= rest - 1) {
        const Element x = std::countr_zero(rest);
        total += std::max(bank[k].weights[x] - threshold[x], 0.0);
      }
      fresh_gain += bank[k].probability * total;
    }
    const double step3_rhs = ctx_.p == 1
                                 ? inv_alpha * e.joint_remainder
                                 : e.joint_remainder - inv_alpha * e.remainder;
    ++steps_.checks;
    if (fresh_gain < step3_rhs - kTol * std::max(1.0, step3_rhs)) {
      steps_.Fail("step 3: " + FormatNumber(fresh_gain) + " < " +
                     FormatNumber(step3_rhs) + " " + where);
    }
    return {gain, fresh_gain};
  }

  const Context& ctx_;
  std::unordered_map<Mask, SetExpectations> cache_;
  PropertyResult feasibility_;
  PropertyResult telescoping_;
  PropertyResult balanced_;
  PropertyResult steps_;
  PropertyResult monotone_;
};

PropertyResult ApproximationRatio(const Context& ctx,
                                  const std::vector<std::vector<Element>>& orders,
                                  bool adaptive) {
  PropertyResult res{"approximation_ratio"};
  const double bound = GuaranteeFactor(ctx.p, ctx.alpha);
  std::vector<Adversary> adversaries;
  for (const std::vector<Element>& order : orders) {
    adversaries.push_back(Adversary::Fixed(order));
  }
  adversaries.push_back(Adversary::UniformRandom());
  if (adaptive) {
    adversaries.push_back(Adversary::GreedyAdaptive());
    adversaries.push_back(Adversary::WorstCase());
  }
  double worst = kInfiniteThreshold;
  for (const Adversary& adv : adversaries) {
    SimulationOptions options;
    options.workers = 1;
    const SimulationReport r =
        Simulate(ctx.instance, *ctx.tested, adv, options);
    ++res.checks;
    worst = std::min(worst, r.ratio);
    if (r.gambler.mean < bound * r.prophet.mean) {
      res.Fail(adv.Name() + (adv.order.empty() ? "" : " " + ShowOrder(adv.order)) +
               ": gambler " + FormatNumber(r.gambler.mean) + " < " +
               FormatNumber(bound) + " * prophet " + FormatNumber(r.prophet.mean));
    }
  }
  res.note = "bound " + FormatNumber(bound) + ", worst ratio " + FormatNumber(worst);
  return res;
}

}  // namespace

double GuaranteeFactor(int p, double alpha) {
  if (p == 1) return 1 / alpha;
  return (alpha - p) / (alpha * (alpha - 1));
}

bool PropertyReport::AllPassed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const PropertyResult& r) { return r.passed; });
}

const PropertyResult* PropertyReport::Find(const std::string& name) const {
  for (const PropertyResult& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

PropertyReport RunPropertySuite(const Instance& instance,
                                const PropertyOptions& options) {
  instance.Validate();
  const int n = instance.size();
  if (n > kMaxSuiteElements) {
    throw RefusedError("property suite supports at most " +
                       std::to_string(kMaxSuiteElements) + " elements");
  }
  if (!instance.profile.AllFinite() ||
      OutcomeCount(instance.profile) > kMaxSuiteOutcomes) {
    throw RefusedError("property suite needs an outcome table of at most " +
                       std::to_string(kMaxSuiteOutcomes) + " entries");
  }
  Context ctx{instance};
  ctx.n = n;
  ctx.p = instance.num_matroids();
  ctx.alpha = options.alpha > 0 ? options.alpha
                                 : (ctx.p == 1 ? 2.0 : 2.0 * ctx.p);
  ctx.reference = MakeIntersectionBalancedPolicy(
      instance.matroids, instance.profile, ctx.alpha, Estimator::Exact());
  ctx.tested = ctx.reference;
  if (options.threshold_scale != 1.0) {
    ctx.tested = std::make_shared<ScaledPolicy>(ctx.reference,
                                                options.threshold_scale);
  }
  const std::size_t count = ctx.bank().size();
  if (options.depth == 0 || options.depth >= count) {
    for (std::size_t k = 0; k < count; ++k) ctx.visit.push_back(k);
  } else {
    ctx.visits_all = false;
    for (std::size_t i = 0; i < options.depth; ++i) {
      ctx.visit.push_back(i * count / options.depth);
    }
  }
  const Mask full = Bit(n) - 1;
  ctx.feasible.assign(full + 1, 1);
  for (const MatroidPtr& m : instance.matroids) {
    std::vector<char> ind(full + 1);
    for (Mask s = 0; s <= full; ++s) {
      ind[s] = m->IsIndependent(ElementSet::FromMask(s));
      ctx.feasible[s] = ctx.feasible[s] && ind[s];
    }
    ctx.independent.push_back(std::move(ind));
  }
  for (Mask s = 0; s <= full; ++s) {
    if (ctx.feasible[s]) ctx.feasible_masks.push_back(s);
  }

  std::vector<std::vector<Element>> orders;
  std::vector<Element> identity = ElementSet::Range(n).Elements();
  orders.push_back(identity);
  if (options.orders > 1) {
    orders.emplace_back(identity.rbegin(), identity.rend());
  }
  RandomStream stream(options.seed);
  for (int o = 2; o < options.orders; ++o) {
    std::vector<Element> order = identity;
    stream.Shuffle(order);
    orders.push_back(std::move(order));
  }

  PropertyReport report;
  report.instance = instance.name;
  report.results.push_back(MatroidAxioms(ctx));
  report.results.push_back(MaxWeightOptimality(ctx));
  report.results.push_back(RemainderPartition(ctx));
  report.results.push_back(ThresholdIdentity(ctx));
  std::vector<std::vector<double>> tables;
  if (ctx.p == 1) {
    for (std::size_t k : ctx.visit) tables.push_back(RemainderTable(ctx, k));
  }
  report.results.push_back(Submodularity(ctx, tables));
  report.results.push_back(RejectedSetBound(ctx, tables));
  TraceChecks traces(ctx);
  traces.Run(orders);
  for (PropertyResult& r : traces.Results()) report.results.push_back(std::move(r));
  report.results.push_back(ApproximationRatio(ctx, orders, options.adaptive));
  return report;
}

PropertyResult MonotonicityReplays(const Instance& instance,
                                   const ThresholdPolicy& policy, int replays,
                                   std::uint64_t seed) {
  PropertyResult res{"monotonicity"};
  const int n = instance.size();
  for (int r = 0; r < replays; ++r) {
    RandomStream stream = RandomStream::ForTrial(seed, r);
    const WeightVector w = instance.profile.Sample(stream);
    std::vector<Element> order = ElementSet::Range(n).Elements();
    stream.Shuffle(order);
    InputSequence seq;
    for (Element x : order) seq.emplace_back(x, w[x]);
    const SelectionTrace trace = RunPolicy(policy, seq);
    const std::size_t i = stream.UniformInt(n);
    InputSequence changed = seq;
    changed[i].second += 0.25 + stream.Uniform01() * std::max(1.0, seq[i].second);
    const SelectionTrace replay = RunPolicy(policy, changed);
    ++res.checks;
    bool ok = !(trace.steps[i].accepted && !replay.steps[i].accepted);
    for (std::size_t s = 0; s < i; ++s) {
      ok = ok && replay.steps[s].accepted == trace.steps[s].accepted &&
           replay.steps[s].threshold == trace.steps[s].threshold;
    }
    ok = ok && replay.steps[i].threshold == trace.steps[i].threshold;
    if (!ok) {
      res.Fail("replay " + std::to_string(r) + ": raising element " +
               std::to_string(seq[i].first) + " from " +
               FormatNumber(seq[i].second) + " to " +
               FormatNumber(changed[i].second) + " " + ShowOrder(order));
    }
  }
  return res;
}

std::string PropertyReportJson(const std::vector<PropertyReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const PropertyReport& report : reports) {
    nlohmann::ordered_json entry;
    entry["instance"] = report.instance;
    entry["passed"] = report.AllPassed();
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const PropertyResult& r : report.results) {
      results.push_back({{"name", r.name},
                         {"passed", r.passed},
                         {"checks", r.checks},
                         {"witness", r.witness},
                         {"note", r.note}});
    }
    entry["results"] = std::move(results);
    out.push_back(std::move(entry));
  }
  return out.dump(2) + "\n";
}

}  // namespace prophet
