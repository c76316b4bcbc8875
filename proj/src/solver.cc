// Copyright 2026 The discbal Authors
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

#include "discbal/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "discbal/mwu.h"
#include "discbal/pairwise.h"
#include "discbal/parallel.h"
#include "discbal/partition.h"
#include "discbal/potential.h"
#include "solver_internal.h"

namespace discbal {
namespace {

using Json = nlohmann::json;
using internal::BalanceParts;
using internal::Mixture;
using internal::Params;

SolveResult Finish(const WeightedSystem& a, Assignment chi,
                   std::vector<double> bound, Json telemetry) {
  SolveResult r;
  r.report = Evaluate(a, chi);
  AttachBound(r.report, std::move(bound));
  r.chi = std::move(chi);
  r.telemetry = std::move(telemetry);
  r.telemetry["certified"] = r.report.Certified();
  r.telemetry["max_ratio"] = r.report.max_ratio;
  return r;
}

SolveResult DirectSolve(const SetSystem& sets, const ConstantsProfile& profile,
                        const char* path) {
  const WeightedSystem a = WeightedSystem::FromSetSystem(sets);
  const SeqResult sd = SeqDerandomize(a, Params(profile, sets.num_sets()));
  Json tel;
  tel["path"] = path;
  return Finish(a, sd.chi, sd.report.bound, tel);
}

int ClampParts(long long parts, int n) {
  const long long cap = PowerOfTwoAtMost(std::max(1, n));
  return static_cast<int>(std::max(1LL, std::min(parts, cap)));
}

}  // namespace

SolveResult WarmupSqrt(const SetSystem& sets, const ConstantsProfile& profile) {
  const int n = sets.n();
  const int m = sets.num_sets();
  const WeightedSystem a = WeightedSystem::FromSetSystem(sets);
  if (n <= 1 || m == 0) return DirectSolve(sets, profile, "direct");
  const PotentialParams params = Params(profile, m);
  const int parts = ClampParts(PowerOfTwoAtLeast(std::sqrt(n)), n);
  const MultiwayResult mw = MultiwayUnweighted(sets, parts, 0.5, params);
  const auto pieces = SplitByPartition(a, mw.partition);
  std::vector<int> all(parts);
  for (int t = 0; t < parts; ++t) all[t] = t;
  Assignment chi_bar(n, 1);
  std::vector<double> sq(m, 0.0);
  BalanceParts(pieces, mw.partition, all, std::vector<double>(m, 0.0), params,
               chi_bar, sq);
  const WeightedSystem mix = Mixture(a, mw.partition, chi_bar);
  const SeqResult top = SeqDerandomize(mix, params);
  Assignment chi = Mix(chi_bar, mw.partition, top.chi);

  Json tel;
  tel["path"] = "warmup_sqrt";
  tel["parts"] = parts;
  tel["max_part"] = mw.max_part;
  const double log_m = LogHat(m);
  double k1 = 0.0;
  for (int i = 0; i < m; ++i) {
    if (sets.row_size(i) == 0) continue;
    k1 = std::max(k1, top.report.bound[i] * top.report.bound[i] /
                          (sets.row_size(i) * log_m * log_m));
  }
  tel["k1_certified"] = k1;
  return Finish(a, std::move(chi), top.report.bound, tel);
}

SolveResult WarmupSqrtOptimal(const SetSystem& sets,
                              const ConstantsProfile& profile) {
  const int n = sets.n();
  const int m = sets.num_sets();
  const WeightedSystem a = WeightedSystem::FromSetSystem(sets);
  if (n <= 1 || m == 0) return DirectSolve(sets, profile, "direct");
  const double log_m = LogHat(m);
  const double eps = std::min(0.5, 1.0 / (10.0 * log_m));
  const int groups = ClampParts(
      PowerOfTwoAtLeast(profile.warmup_groups.Eval(m)), n);
  const PotentialParams coarse_params = Params(profile, m);
  const MultiwayResult coarse =
      MultiwayUnweighted(sets, groups, eps, coarse_params);
  const double s = sets.s_max();
  double delta_add = 0.0;
  for (int i = 0; i < m; ++i) {
    delta_add = std::max(delta_add, coarse.certified[i] / (1.0 + eps) - s / groups);
  }
  const double denom = (1.0 + eps) * (1.0 + eps) * (s / groups + delta_add);

  // Pieces: each group split into about sqrt(n / T) parts.
  std::vector<std::vector<int>> piece_parts;
  std::vector<int> piece_group;
  for (int g = 0; g < groups; ++g) {
    const auto& part = coarse.partition.part(g);
    if (part.empty()) continue;
    const auto local = Restrict(sets, part);
    const int count = ClampParts(
        PowerOfTwoAtLeast(std::sqrt(static_cast<double>(n) / groups)),
        static_cast<int>(part.size()));
    const MultiwayResult mw =
        MultiwayUnweighted(local.system, count, 0.5, coarse_params);
    for (const auto& q : mw.partition.parts()) {
      if (q.empty()) continue;
      std::vector<int> global;
      for (int j : q) global.push_back(part[j]);
      piece_parts.push_back(std::move(global));
      piece_group.push_back(g);
    }
  }
  const Partition pieces_p = Partition::FromParts(n, piece_parts);
  const IntersectionTable table = ComputeIntersections(sets, pieces_p);
  int k_max = 1;
  for (int c : table.counts) k_max = std::max(k_max, c);

  const double m_sd = std::max({static_cast<double>(m), 2.0, std::ceil(1.0 / eps)});
  const PotentialParams params = Params(profile, m_sd);
  const double width = std::min(profile.tail_coeff * profile.tail_coeff *
                                    std::log(params.M),
                                static_cast<double>(k_max)) /
                       (1.0 + eps);
  MwuState mwu(m, width, eps);
  const auto pieces = SplitByPartition(a, pieces_p);
  Assignment chi_bar(n, 1);
  for (int g = 0; g < groups; ++g) {
    std::vector<int> which;
    for (size_t q = 0; q < piece_group.size(); ++q) {
      if (piece_group[q] == g) which.push_back(static_cast<int>(q));
    }
    if (which.empty()) continue;
    std::vector<double> sq(m, 0.0);
    BalanceParts(pieces, pieces_p, which, mwu.importance().log_weights(),
                 params, chi_bar, sq);
    std::vector<double> gaps(m);
    for (int i = 0; i < m; ++i) gaps[i] = std::min(sq[i] / denom, width);
    mwu.Update(gaps);
  }
  const WeightedSystem mix = Mixture(a, pieces_p, chi_bar);
  const SeqResult top = SeqDerandomize(mix, Params(profile, m));
  Assignment chi = Mix(chi_bar, pieces_p, top.chi);

  Json tel;
  tel["path"] = "warmup_sqrt_optimal";
  tel["groups"] = groups;
  tel["pieces"] = pieces_p.num_parts();
  tel["mwu_rounds"] = mwu.rounds();
  tel["mwu_required_rounds"] = RequiredRounds(width, eps, m);
  std::vector<double> avg = mwu.Averages();
  tel["mwu_max_average"] = *std::max_element(avg.begin(), avg.end());
  double k2 = 0.0;
  for (int i = 0; i < m; ++i) {
    if (sets.row_size(i) == 0) continue;
    k2 = std::max(k2, top.report.bound[i] * top.report.bound[i] /
                          (sets.row_size(i) * log_m));
  }
  tel["k2_certified"] = k2;
  return Finish(a, std::move(chi), top.report.bound, tel);
}

CreatorResult RecursionCreator(const WeightedSystem& a, double delta,
                               const ConstantsProfile& profile) {
  const int n = a.n();
  const int m = a.num_rows();
  for (int i = 0; i < m; ++i) {
    if (a.row_norm(i) > delta * (1.0 + 1e-12)) {
      throw InvalidInput("row norm exceeds delta");
    }
  }
  if (n < 4) throw InvalidInput("recursion needs at least 4 columns");
  const double nm = std::max(n, 2) * std::max(m, 2) * 1.0;
  const double log_nm = std::log(nm);
  const double eps = profile.creator_eps > 0.0
                         ? profile.creator_eps
                         : 1.0 / (100.0 * log_nm * log_nm);
  const double part_size = profile.creator_part_size.Eval(nm);
  const int parts =
      ClampParts(PowerOfTwoAtLeast(n / part_size), n / 2);
  const double m_sd = std::max(nm, 2.0);
  const PotentialParams params = Params(profile, m_sd);
  const WeightedMultiwayResult wm =
      MultiwayWeighted(a, parts, std::min(eps, 1.0), Params(profile, 0.0));
  const double target_groups =
      profile.creator_groups.coef > 0.0
          ? profile.creator_groups.Eval(nm)
          : log_nm * log_nm / (eps * eps);
  const int groups =
      static_cast<int>(std::min<long long>(PowerOfTwoAtLeast(target_groups), parts));
  const int per_group = parts / groups;

  // D_i = (1 + 1/M) max_g mass_i(G_g), so importance w_i / D_i makes the
  // per-part guarantee imply the MWU oracle inequality for every round.
  std::vector<double> group_max(m, 0.0);
  {
    std::vector<double> acc(groups, 0.0);
    for (int i = 0; i < m; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      auto c = a.cols(i);
      auto v = a.vals(i);
      for (size_t k = 0; k < c.size(); ++k) {
        acc[wm.partition.part_of(c[k]) / per_group] += v[k] * v[k];
      }
      group_max[i] = *std::max_element(acc.begin(), acc.end());
    }
  }
  std::vector<double> d(m);
  for (int i = 0; i < m; ++i) d[i] = (1.0 + 1.0 / params.M) * group_max[i];
  const double width = profile.tail_coeff * profile.tail_coeff * std::log(params.M);
  MwuState mwu(std::max(m, 1), width, std::min(eps, 0.5));
  const auto pieces = SplitByPartition(a, wm.partition);
  Assignment chi_bar(n, 1);
  for (int g = 0; g < groups; ++g) {
    std::vector<int> which;
    for (int l = g * per_group; l < (g + 1) * per_group; ++l) which.push_back(l);
    std::vector<double> log_imp(m);
    for (int i = 0; i < m; ++i) {
      log_imp[i] = d[i] > 0.0 ? mwu.importance().log_weight(i) - std::log(d[i])
                              : -std::numeric_limits<double>::infinity();
    }
    std::vector<double> sq(m, 0.0);
    BalanceParts(pieces, wm.partition, which, log_imp, params, chi_bar, sq);
    std::vector<double> gaps(std::max(m, 1), 0.0);
    for (int i = 0; i < m; ++i) {
      if (d[i] > 0.0) gaps[i] = std::min(sq[i] / d[i], width);
    }
    mwu.Update(gaps);
  }

  CreatorResult r;
  r.partition = wm.partition;
  r.chi_bar = chi_bar;
  r.mixture = Mixture(a, wm.partition, chi_bar);
  r.variance_cap = 1.0 + 1.0 / (10.0 * std::pow(LogHat(n), 2));
  double max_sq = 0.0;
  for (int i = 0; i < m; ++i) {
    if (delta > 0.0) {
      r.variance_ratio = std::max(r.variance_ratio, r.mixture.row_norm(i) / delta);
    }
    max_sq = std::max(max_sq, r.mixture.max_abs(i) * r.mixture.max_abs(i));
  }
  if (delta > 0.0) r.spread_const = max_sq * parts / (delta * log_nm);
  Json& tel = r.telemetry;
  tel["n"] = n;
  tel["parts"] = parts;
  tel["groups"] = groups;
  tel["eps"] = eps;
  tel["variance_ratio"] = r.variance_ratio;
  tel["variance_cap"] = r.variance_cap;
  tel["variance_ok"] = r.variance_ratio <= r.variance_cap;
  tel["spread_const"] = r.spread_const;
  tel["partition_certified"] = wm.certified_ok;
  tel["mass_add"] = wm.mass_add;
  std::vector<double> avg = mwu.Averages();
  tel["mwu_max_average"] = *std::max_element(avg.begin(), avg.end());
  tel["mwu_rounds"] = mwu.rounds();
  return r;
}

SolveResult SolveBalancedWeights(const WeightedSystem& a, double delta,
                                 const ConstantsProfile& profile) {
  const int m = a.num_rows();
  const int n0 = a.n();
  const double nm = std::max(n0, 2) * std::max(m, 2) * 1.0;
  for (int i = 0; i < m; ++i) {
    if (a.row_norm(i) > delta * (1.0 + 1e-12)) {
      throw InvalidInput("row norm exceeds delta");
    }
    const double mx = a.max_abs(i);
    if (mx * mx > std::pow(std::log(nm), 5) / std::max(n0, 1) * delta *
                      (1.0 + 1e-12)) {
      throw InvalidInput("entry too large for the balanced-weights recursion");
    }
  }
  const double base = profile.balanced_base.Eval(m);
  std::vector<WeightedSystem> levels = {a};
  std::vector<CreatorResult> steps;
  Json level_tel = Json::array();
  double d = delta;
  while (levels.back().n() >= base && levels.back().n() >= 4) {
    const WeightedSystem& cur = levels.back();
    CreatorResult step = RecursionCreator(cur, d, profile);
    if (step.partition.num_parts() * 2 > cur.n()) {
      throw ContractViolation("recursion failed to halve the column count");
    }
    double measured = 0.0;
    for (int i = 0; i < m; ++i) measured = std::max(measured, step.mixture.row_norm(i));
    d = std::max(d * (1.0 + 1.0 / (10.0 * std::pow(LogHat(cur.n()), 2))), measured);
    level_tel.push_back(step.telemetry);
    levels.push_back(step.mixture);
    steps.push_back(std::move(step));
  }
  const PotentialParams params = Params(profile, m);
  const SeqResult bottom = SeqDerandomize(levels.back(), params);
  Assignment chi = bottom.chi;
  for (int k = static_cast<int>(steps.size()) - 1; k >= 0; --k) {
    chi = Mix(steps[k].chi_bar, steps[k].partition, chi);
  }
  Json tel;
  tel["path"] = "balanced_weights";
  tel["levels"] = level_tel;
  tel["base_columns"] = levels.back().n();
  const double log_n = LogHat(n0);
  const double log_m = LogHat(m);
  double c_eff = 0.0;
  for (int i = 0; i < m; ++i) {
    if (delta <= 0.0) break;
    const double b = bottom.report.bound[i];
    c_eff = std::max(c_eff, b * b / ((2.0 - 1.0 / log_n) * log_m * delta));
  }
  tel["c_eff"] = c_eff;
  return Finish(a, std::move(chi), bottom.report.bound, tel);
}

SolveResult SolveUnweighted(const SetSystem& sets,
                            const ConstantsProfile& profile) {
  const int n = sets.n();
  const int m = sets.num_sets();
  const double s = sets.s_max();
  if (n <= 1 || m == 0 || s <= profile.unweighted_direct.Eval(m)) {
    return DirectSolve(sets, profile, "direct");
  }
  const double eps = profile.unweighted_eps;
  const double load = profile.unweighted_part_load.Eval(m);
  const int parts = ClampParts(PowerOfTwoAtMost(s / load), n / 2);
  if (parts < 2 || s / load < 2.0) return DirectSolve(sets, profile, "direct");

  const PotentialParams params = Params(profile, m);
  const MultiwayResult mw = MultiwayUnweighted(sets, parts, std::min(eps, 0.5), params);
  const IntersectionTable table = ComputeIntersections(sets, mw.partition);
  int k_max = 1;
  for (int c : table.counts) k_max = std::max(k_max, c);
  const double mwu_eps = std::min(eps, 0.5);
  const double target_groups =
      profile.unweighted_groups.coef > 0.0
          ? profile.unweighted_groups.Eval(m)
          : 9.0 * k_max * LogHat(m) / (mwu_eps * mwu_eps);
  const int groups = static_cast<int>(
      std::min<long long>(PowerOfTwoAtLeast(target_groups), parts));
  const int per_group = parts / groups;

  // D_i = max_g |S_i cap G_g|, the normalizer that keeps the oracle
  // inequality exact for sets of every size.
  std::vector<double> d(m, 0.0);
  for (int i = 0; i < m; ++i) {
    std::vector<int> per(groups, 0);
    for (int64_t k = table.offsets[i]; k < table.offsets[i + 1]; ++k) {
      per[table.parts[k] / per_group] += table.counts[k];
    }
    d[i] = *std::max_element(per.begin(), per.end());
  }
  MwuState mwu(m, static_cast<double>(k_max), mwu_eps);
  Assignment chi_bar(n, 1);
  std::vector<double> pair_ratio;
  for (int g = 0; g < groups; ++g) {
    // Ground set of the group, and the family {S_i cap P_l : l in group}.
    std::vector<int> ground;
    for (int l = g * per_group; l < (g + 1) * per_group; ++l) {
      const auto& q = mw.partition.part(l);
      ground.insert(ground.end(), q.begin(), q.end());
    }
    std::vector<int> local(n, -1);
    for (size_t k = 0; k < ground.size(); ++k) local[ground[k]] = static_cast<int>(k);
    std::vector<std::vector<int>> family;
    std::vector<int> owner;
    std::vector<double> log_imp;
    for (int i = 0; i < m; ++i) {
      if (d[i] <= 0.0) continue;
      std::vector<std::vector<int>> by_part(per_group);
      for (int j : sets.row(i)) {
        if (local[j] < 0) continue;
        by_part[mw.partition.part_of(j) - g * per_group].push_back(local[j]);
      }
      for (auto& f : by_part) {
        if (f.empty()) continue;
        family.push_back(std::move(f));
        owner.push_back(i);
        log_imp.push_back(mwu.importance().log_weight(i) - std::log(d[i]));
      }
    }
    const SetSystem fam = SetSystem::FromRows(static_cast<int>(ground.size()), family);
    const PairwiseResult pw =
        PairwiseBalance(fam, ImportanceVector::FromLog(log_imp));
    for (size_t k = 0; k < ground.size(); ++k) chi_bar[ground[k]] = pw.chi[k];
    if (pw.mean_objective > 0.0) pair_ratio.push_back(pw.objective / pw.mean_objective);
    std::vector<double> gaps(m, 0.0);
    for (int f = 0; f < fam.num_sets(); ++f) {
      int64_t sum = 0;
      for (int j : fam.row(f)) sum += pw.chi[j];
      gaps[owner[f]] += static_cast<double>(sum * sum) / d[owner[f]];
    }
    mwu.Update(gaps);
  }

  const WeightedSystem a = WeightedSystem::FromSetSystem(sets);
  const WeightedSystem mix = Mixture(a, mw.partition, chi_bar);
  double d_prime = 0.0;
  for (int i = 0; i < m; ++i) d_prime = std::max(d_prime, mix.row_norm(i));
  SolveResult inner = SolveBalancedWeights(mix, std::max(d_prime, 1.0), profile);
  Assignment chi = Mix(chi_bar, mw.partition, inner.chi);

  Json tel;
  tel["path"] = "recursive";
  tel["parts"] = parts;
  tel["groups"] = groups;
  tel["k_max"] = k_max;
  tel["c_add"] = mw.c_add;
  tel["mwu_rounds"] = mwu.rounds();
  tel["mwu_required_rounds"] = RequiredRounds(k_max, mwu_eps, m);
  std::vector<double> avg = mwu.Averages();
  tel["mwu_max_average"] = *std::max_element(avg.begin(), avg.end());
  tel["mixture_variance"] = d_prime;
  tel["mixture_variance_over_s"] = d_prime / s;
  tel["mixture_variance_cap_over_s"] = 1.0 + 3.0 * eps;
  tel["balanced"] = inner.telemetry;
  const double c_eff = inner.telemetry.value("c_eff", 0.0);
  tel["global_cap"] = std::sqrt(3.0 * c_eff * LogHat(m) * s);
  return Finish(a, std::move(chi), inner.report.bound, tel);
}

}  // namespace discbal
