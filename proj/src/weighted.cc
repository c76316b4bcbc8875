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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "discbal/isolate.h"
#include "discbal/mwu.h"
#include "discbal/potential.h"
#include "discbal/solver.h"
#include "solver_internal.h"

namespace discbal {
namespace {

using Json = nlohmann::json;
using internal::BalanceParts;
using internal::Params;

enum class BucketClass : int8_t { kSmall, kMedium, kLarge };

// Per row, the class of every stored entry.
std::vector<std::vector<BucketClass>> ClassifyEntries(
    const IntSystem& a, double ratio, double small_thr, double large_thr,
    std::vector<std::vector<std::vector<int>>>& big_buckets) {
  const int m = a.num_rows();
  const double log_r = std::log(ratio);
  std::vector<std::vector<BucketClass>> out(m);
  big_buckets.assign(m, {});
  for (int i = 0; i < m; ++i) {
    const int64_t lo = a.offsets[i];
    const int64_t hi = a.offsets[i + 1];
    out[i].assign(hi - lo, BucketClass::kSmall);
    if (hi == lo) continue;
    int64_t mx = 0;
    for (int64_t k = lo; k < hi; ++k) mx = std::max(mx, std::abs(a.vals[k]));
    // Bucket k holds max / r^{k+1} < |a| <= max / r^k.
    std::vector<std::pair<int, int64_t>> keyed;
    for (int64_t k = lo; k < hi; ++k) {
      const double q = static_cast<double>(mx) / std::abs(a.vals[k]);
      int b = static_cast<int>(std::floor(std::log(q) / log_r));
      b = std::max(b, 0);
      while (b > 0 && q < std::pow(ratio, b)) --b;
      while (q >= std::pow(ratio, b + 1)) ++b;
      keyed.emplace_back(b, k);
    }
    std::sort(keyed.begin(), keyed.end());
    for (size_t t = 0; t < keyed.size();) {
      size_t u = t;
      while (u < keyed.size() && keyed[u].first == keyed[t].first) ++u;
      const double size = static_cast<double>(u - t);
      BucketClass c = BucketClass::kMedium;
      if (size <= small_thr) c = BucketClass::kSmall;
      else if (size >= large_thr) c = BucketClass::kLarge;
      if (c != BucketClass::kSmall) {
        std::vector<int> cols;
        for (size_t v = t; v < u; ++v) cols.push_back(a.cols[keyed[v].second]);
        std::sort(cols.begin(), cols.end());
        big_buckets[i].push_back(std::move(cols));
      }
      for (size_t v = t; v < u; ++v) out[i][keyed[v].second - lo] = c;
      t = u;
    }
  }
  return out;
}

int64_t InitialBudget(int n, int m, double delta) {
  const double log_n = LogHat(n);
  const double x = std::max(m, 1) / (0.5 * (1.0 + 1.0 / log_n));
  return static_cast<int64_t>(
      std::ceil(std::max(0.0, std::log(x)) / -std::log1p(-delta)));
}

}  // namespace

WeightedSystem IntSystem::ToWeighted() const {
  std::vector<Triple> t;
  t.reserve(cols.size());
  for (int i = 0; i < num_rows(); ++i) {
    for (int64_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      t.push_back({i, cols[k], static_cast<double>(vals[k])});
    }
  }
  return WeightedSystem::FromTriples(n, num_rows(), std::move(t));
}

WeightedStepResult MwuWeightedStep(const IntSystem& a,
                                   const std::vector<int64_t>& budgets,
                                   const ConstantsProfile& profile) {
  const int n = a.n;
  const int m = a.num_rows();
  if (static_cast<int>(budgets.size()) != m) {
    throw InvalidInput("one budget per row is required");
  }
  const double log_n = LogHat(n);
  const double x = std::max(n, 2) * std::max(m, 2) * 1.0;
  const double ratio = profile.bucket_ratio > 0.0
                           ? profile.bucket_ratio
                           : 1.0 + 1.0 / std::pow(log_n, 3);
  const double small_thr = profile.small_bucket.Eval(x);
  const double large_thr = profile.large_bucket.Eval(x);
  std::vector<std::vector<std::vector<int>>> buckets;
  const auto cls = ClassifyEntries(a, ratio, small_thr, large_thr, buckets);

  // Isolation families: per row the small and medium entries (chunked to
  // the size cap), and every medium or large bucket.
  const double small_cap = std::max(1.0, std::floor(profile.isolation_small_cap.Eval(x)));
  const double step_log = std::log1p(-profile.delta);
  std::vector<WeightedSet> small;
  std::vector<std::vector<int>> big;
  for (int i = 0; i < m; ++i) {
    WeightedSet cur;
    cur.log_imp = static_cast<double>(budgets[i]) * step_log;
    for (int64_t k = a.offsets[i]; k < a.offsets[i + 1]; ++k) {
      if (cls[i][k - a.offsets[i]] == BucketClass::kLarge) continue;
      cur.elems.push_back(a.cols[k]);
      if (cur.elems.size() >= small_cap) {
        small.push_back(cur);
        cur.elems.clear();
      }
    }
    if (!cur.elems.empty()) small.push_back(std::move(cur));
    for (auto& b : buckets[i]) big.push_back(std::move(b));
  }
  IsolationResult iso = IsolationPartition(n, small, big, profile, m);

  // Medium and large entries, balanced inside fine parts.
  std::vector<Triple> ml_t;
  for (int i = 0; i < m; ++i) {
    for (int64_t k = a.offsets[i]; k < a.offsets[i + 1]; ++k) {
      if (cls[i][k - a.offsets[i]] == BucketClass::kSmall) continue;
      ml_t.push_back({i, a.cols[k], static_cast<double>(a.vals[k])});
    }
  }
  const WeightedSystem ml = WeightedSystem::FromTriples(n, m, std::move(ml_t));
  const Partition& fine = iso.fine;
  const int coarse_count = iso.coarse.num_parts();

  const double m_sd = std::max(x, 2.0);
  const PotentialParams params = Params(profile, m_sd);
  std::vector<double> d(m, 0.0);
  {
    std::vector<double> acc(coarse_count);
    for (int i = 0; i < m; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      auto c = ml.cols(i);
      auto v = ml.vals(i);
      for (size_t k = 0; k < c.size(); ++k) {
        acc[iso.coarse.part_of(c[k])] += v[k] * v[k];
      }
      if (!acc.empty()) {
        d[i] = (1.0 + 1.0 / params.M) * *std::max_element(acc.begin(), acc.end());
      }
    }
  }
  const double eps_mwu = std::min(
      0.5, profile.creator_eps > 0.0 ? profile.creator_eps
                                     : 1.0 / std::pow(log_n, 3));
  const double width =
      profile.tail_coeff * profile.tail_coeff * std::log(params.M);
  MwuState mwu(std::max(m, 1), width, eps_mwu);
  const auto pieces = SplitByPartition(ml, fine);
  Assignment chi_bar(n, 1);
  std::vector<double> ml_square(m, 0.0);
  for (int g = 0; g < coarse_count; ++g) {
    std::vector<int> which;
    for (int t = 0; t < fine.num_parts(); ++t) {
      if (iso.coarse_of_fine[t] == g) which.push_back(t);
    }
    if (which.empty()) continue;
    std::vector<double> log_imp(m);
    for (int i = 0; i < m; ++i) {
      log_imp[i] = d[i] > 0.0 ? mwu.importance().log_weight(i) - std::log(d[i])
                              : -std::numeric_limits<double>::infinity();
    }
    std::vector<double> sq(m, 0.0);
    BalanceParts(pieces, fine, which, log_imp, params, chi_bar, sq);
    std::vector<double> gaps(std::max(m, 1), 0.0);
    for (int i = 0; i < m; ++i) {
      ml_square[i] += sq[i];
      if (d[i] > 0.0) gaps[i] = std::min(sq[i] / d[i], width);
    }
    mwu.Update(gaps);
  }

  // Collision sets: inside each fine part, keep one small entry only when
  // the part has no medium entry of the row; isolate the rest.
  WeightedStepResult r;
  r.col.assign(m, {});
  int64_t total_col = 0;
  int64_t truncated = 0;
  for (int i = 0; i < m; ++i) {
    std::vector<std::vector<int>> small_in(fine.num_parts());
    std::vector<int> medium_in(fine.num_parts(), 0);
    std::vector<int> touched;
    for (int64_t k = a.offsets[i]; k < a.offsets[i + 1]; ++k) {
      const BucketClass c = cls[i][k - a.offsets[i]];
      const int t = fine.part_of(a.cols[k]);
      if (c == BucketClass::kLarge) continue;
      if (small_in[t].empty() && medium_in[t] == 0) touched.push_back(t);
      if (c == BucketClass::kSmall) small_in[t].push_back(a.cols[k]);
      else ++medium_in[t];
    }
    std::sort(touched.begin(), touched.end());
    int64_t left = std::max<int64_t>(0, budgets[i]);
    for (int t : touched) {
      const auto& s = small_in[t];
      const int64_t want =
          medium_in[t] > 0 ? static_cast<int64_t>(s.size())
                           : std::max<int64_t>(0, static_cast<int64_t>(s.size()) - 1);
      const int64_t take = std::min(want, left);
      truncated += want - take;
      // Columns are stored sorted, so s holds the lowest indices first.
      for (int64_t u = 0; u < take; ++u) r.col[i].push_back(s[u]);
      left -= take;
    }
    std::sort(r.col[i].begin(), r.col[i].end());
    total_col += static_cast<int64_t>(r.col[i].size());
  }

  r.fine = fine;
  r.chi_bar = std::move(chi_bar);
  Json& tel = r.telemetry;
  tel["n"] = n;
  tel["fine_parts"] = fine.num_parts();
  tel["coarse_parts"] = coarse_count;
  tel["small_threshold"] = small_thr;
  tel["large_threshold"] = large_thr;
  const IsolationChecks& ck = iso.checks;
  tel["isolation_ok"] = ck.AllOk();
  tel["isolation"] = {{"coarse_ok", ck.coarse_ok},
                      {"fine_count_ok", ck.fine_count_ok},
                      {"refinement_ok", ck.refinement_ok},
                      {"split_ratio", ck.split_ratio},
                      {"split_cap", ck.split_cap},
                      {"split_balance", ck.split_balance},
                      {"max_fine", ck.max_fine},
                      {"fine_cap", ck.fine_cap},
                      {"inflation", ck.inflation},
                      {"inflation_cap", ck.inflation_cap},
                      {"merges", ck.merges}};
  tel["isolated_columns"] = total_col;
  tel["truncated_columns"] = truncated;
  tel["mwu_rounds"] = mwu.rounds();
  r.isolation_small = std::move(small);
  r.isolation_big = std::move(big);
  std::vector<double> avg = mwu.Averages();
  tel["mwu_max_average"] = *std::max_element(avg.begin(), avg.end());
  double ml_ratio = 0.0;
  for (int i = 0; i < m; ++i) {
    if (ml.row_norm(i) > 0.0) ml_ratio = std::max(ml_ratio, ml_square[i] / ml.row_norm(i));
  }
  tel["ml_square_ratio"] = ml_ratio;
  r.isolation = std::move(iso);
  return r;
}

RecursiveResult SolveWeightedRecursive(const IntSystem& a,
                                       std::vector<int64_t> budgets,
                                       const ConstantsProfile& profile,
                                       const StepObserver& observer) {
  const int m = a.num_rows();
  if (static_cast<int>(budgets.size()) != m) {
    throw InvalidInput("one budget per row is required");
  }
  const double base = profile.weighted_base.Eval(
      3.0 * std::max(m, 2));
  RecursiveResult r;
  r.blocks.assign(m, {});
  std::vector<WeightedStepResult> steps;
  Json levels = Json::array();
  IntSystem cur = a;
  while (cur.n > base && cur.n >= 4) {
    WeightedStepResult step = MwuWeightedStep(cur, budgets, profile);
    const int parts = step.fine.num_parts();
    if (parts >= cur.n) break;
    const int level = static_cast<int>(steps.size());
    IntSystem next;
    next.n = parts;
    std::vector<int64_t> acc(parts, 0);
    std::vector<char> seen(parts, 0);
    std::vector<int> touched;
    for (int i = 0; i < m; ++i) {
      const auto& col = step.col[i];
      size_t c = 0;
      touched.clear();
      for (int64_t k = cur.offsets[i]; k < cur.offsets[i + 1]; ++k) {
        const int j = cur.cols[k];
        const int64_t v = cur.vals[k] * step.chi_bar[j];
        while (c < col.size() && col[c] < j) ++c;
        if (c < col.size() && col[c] == j) {
          r.blocks[i].push_back({level, j, v});
          continue;
        }
        const int t = step.fine.part_of(j);
        if (!seen[t]) {
          seen[t] = 1;
          touched.push_back(t);
        }
        acc[t] += v;
      }
      std::sort(touched.begin(), touched.end());
      for (int t : touched) {
        if (acc[t] != 0) {
          next.cols.push_back(t);
          next.vals.push_back(acc[t]);
        }
        acc[t] = 0;
        seen[t] = 0;
      }
      next.offsets.push_back(static_cast<int64_t>(next.cols.size()));
      budgets[i] -= static_cast<int64_t>(col.size());
    }
    step.telemetry["level"] = level;
    levels.push_back(step.telemetry);
    if (observer) observer(level, step);
    step.isolation_small = {};
    step.isolation_big = {};
    step.isolation = {};
    steps.push_back(std::move(step));
    cur = std::move(next);
  }

  const WeightedSystem base_sys = cur.ToWeighted();
  const SeqResult bottom = SeqDerandomize(base_sys, Params(profile, m));
  r.base_norm.resize(m);
  r.base_sdisc.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    r.base_norm[i] = base_sys.row_norm(i);
    for (int64_t k = cur.offsets[i]; k < cur.offsets[i + 1]; ++k) {
      r.base_sdisc[i] += cur.vals[k] * bottom.chi[cur.cols[k]];
    }
  }
  r.base_log_m = std::log(bottom.params.M);
  Assignment chi = bottom.chi;
  for (int k = static_cast<int>(steps.size()) - 1; k >= 0; --k) {
    chi = Mix(steps[k].chi_bar, steps[k].fine, chi);
  }
  r.chi = std::move(chi);
  r.telemetry["levels"] = levels;
  r.telemetry["base_columns"] = cur.n;
  r.telemetry["base_threshold"] = base;
  r.telemetry["base_tail_coeff"] = bottom.params.tail_coeff;
  return r;
}

SolveResult SolveWeighted(const WeightedSystem& a,
                          const ConstantsProfile& profile,
                          const StepObserver& observer) {
  const int n = a.n();
  const int m = a.num_rows();
  const double n_hat = std::max(n, 2);
  // Integer scale, capped so that every signed sum fits in int64.
  const double scale = std::floor(std::min(
      {std::pow(n_hat, profile.scale_exp), std::ldexp(1.0, 40),
       std::ldexp(1.0, 62) / n_hat}));
  IntSystem ia;
  ia.n = n;
  std::vector<double> row_max(m, 0.0);
  std::vector<double> rounding(m, 0.0);
  for (int i = 0; i < m; ++i) {
    row_max[i] = a.max_abs(i);
    auto c = a.cols(i);
    auto v = a.vals(i);
    if (row_max[i] > 0.0) {
      for (size_t k = 0; k < c.size(); ++k) {
        const int64_t q = std::llround(v[k] / row_max[i] * scale);
        if (q == 0) continue;
        ia.cols.push_back(c[k]);
        ia.vals.push_back(q);
      }
      rounding[i] = 0.5 * (1.0 + 1e-12) * c.size() * row_max[i] / scale;
    }
    ia.offsets.push_back(static_cast<int64_t>(ia.cols.size()));
  }
  const int64_t budget = InitialBudget(n, m, profile.delta);
  RecursiveResult rec = SolveWeightedRecursive(
      ia, std::vector<int64_t>(m, budget), profile, observer);

  const PotentialParams base_params =
      ResolvePotentialParams(Params(profile, m), m);
  std::vector<double> bound(m, 0.0);
  double max_blocks = 0.0;
  for (int i = 0; i < m; ++i) {
    if (row_max[i] == 0.0) continue;
    double z2 = 0.0;
    for (const auto& b : rec.blocks[i]) {
      z2 += static_cast<double>(b.coeff) * static_cast<double>(b.coeff);
    }
    const double zc = static_cast<double>(rec.blocks[i].size());
    max_blocks = std::max(max_blocks, zc);
    const double tail =
        rec.base_norm[i] > 0.0 ? TailBound(rec.base_norm[i], base_params) : 0.0;
    bound[i] = (std::sqrt(zc * z2) + tail) * row_max[i] / scale + rounding[i];
  }
  SolveResult r;
  r.report = Evaluate(a, rec.chi);
  AttachBound(r.report, std::move(bound));
  r.chi = std::move(rec.chi);
  r.telemetry = std::move(rec.telemetry);
  r.telemetry["path"] = "weighted";
  r.telemetry["scale"] = scale;
  r.telemetry["initial_budget"] = budget;
  r.telemetry["max_blocks"] = max_blocks;
  r.telemetry["certified"] = r.report.Certified();
  r.telemetry["max_ratio"] = r.report.max_ratio;
  return r;
}

}  // namespace discbal
