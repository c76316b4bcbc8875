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
#include "discbal/core.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace discbal {

double LogHat(double x) { return std::log(std::max(x, 2.0)); }

double PairwiseSum(std::span<const double> values) {
  constexpr size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const size_t half = values.size() / 2;
  return PairwiseSum(values.first(half)) + PairwiseSum(values.subspan(half));
}

SetSystem SetSystem::FromRows(int n, const std::vector<std::vector<int>>& rows) {
  if (n < 0) throw InvalidInput("negative ground set size");
  SetSystem s;
  s.n_ = n;
  s.offsets_.reserve(rows.size() + 1);
  for (const auto& row : rows) {
    std::vector<int> r = row;
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    for (int j : r) {
      if (j < 0 || j >= n) {
        throw InvalidInput("element " + std::to_string(j) +
                           " outside [0, " + std::to_string(n) + ")");
      }
    }
    s.elems_.insert(s.elems_.end(), r.begin(), r.end());
    s.offsets_.push_back(static_cast<int64_t>(s.elems_.size()));
    s.s_max_ = std::max(s.s_max_, static_cast<int>(r.size()));
  }
  return s;
}

WeightedSystem WeightedSystem::FromTriples(int n, int m,
                                           std::vector<Triple> triples) {
  if (n < 0 || m < 0) throw InvalidInput("negative dimension");
  for (const Triple& t : triples) {
    if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n) {
      throw InvalidInput("entry (" + std::to_string(t.row) + ", " +
                         std::to_string(t.col) + ") out of range");
    }
    if (!std::isfinite(t.value)) throw InvalidInput("non-finite entry");
  }
  std::sort(triples.begin(), triples.end(),
            [](const Triple& a, const Triple& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (size_t k = 1; k < triples.size(); ++k) {
    if (triples[k].row == triples[k - 1].row &&
        triples[k].col == triples[k - 1].col) {
      throw InvalidInput("duplicate entry (" + std::to_string(triples[k].row) +
                         ", " + std::to_string(triples[k].col) + ")");
    }
  }
  WeightedSystem a;
  a.n_ = n;
  a.offsets_.assign(m + 1, 0);
  for (const Triple& t : triples) {
    if (t.value == 0.0) continue;
    a.cols_.push_back(t.col);
    a.vals_.push_back(t.value);
    ++a.offsets_[t.row + 1];
  }
  for (int i = 0; i < m; ++i) a.offsets_[i + 1] += a.offsets_[i];
  a.row_norms_.resize(m);
  std::vector<double> sq;
  for (int i = 0; i < m; ++i) {
    sq.clear();
    for (double v : a.vals(i)) sq.push_back(v * v);
    a.row_norms_[i] = PairwiseSum(sq);
  }
  return a;
}

WeightedSystem WeightedSystem::FromSetSystem(const SetSystem& sets) {
  std::vector<Triple> t;
  t.reserve(sets.nnz());
  for (int i = 0; i < sets.num_sets(); ++i) {
    for (int j : sets.row(i)) t.push_back({i, j, 1.0});
  }
  return FromTriples(sets.n(), sets.num_sets(), std::move(t));
}

double WeightedSystem::max_abs(int i) const {
  double best = 0.0;
  for (double v : vals(i)) best = std::max(best, std::abs(v));
  return best;
}

ColumnIndex::ColumnIndex(const WeightedSystem& a) {
  offsets.assign(a.n() + 1, 0);
  for (int i = 0; i < a.num_rows(); ++i) {
    for (int j : a.cols(i)) ++offsets[j + 1];
  }
  for (int j = 0; j < a.n(); ++j) offsets[j + 1] += offsets[j];
  rows.resize(a.nnz());
  vals.resize(a.nnz());
  std::vector<int64_t> fill(offsets.begin(), offsets.end() - 1);
  for (int i = 0; i < a.num_rows(); ++i) {
    auto c = a.cols(i);
    auto v = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) {
      rows[fill[c[k]]] = i;
      vals[fill[c[k]]++] = v[k];
    }
  }
}

void CheckAssignment(const Assignment& chi, int n) {
  if (static_cast<int>(chi.size()) != n) {
    throw InvalidInput("assignment has length " + std::to_string(chi.size()) +
                       ", expected " + std::to_string(n));
  }
  for (size_t j = 0; j < chi.size(); ++j) {
    if (chi[j] != 1 && chi[j] != -1) {
      throw InvalidInput("assignment entry " + std::to_string(j) +
                         " is not +1 or -1");
    }
  }
}

Partition Partition::FromPartOf(int num_parts, std::vector<int> part_of) {
  Partition p;
  p.parts_.resize(num_parts);
  for (size_t j = 0; j < part_of.size(); ++j) {
    if (part_of[j] < 0 || part_of[j] >= num_parts) {
      throw InvalidInput("element " + std::to_string(j) + " has no part");
    }
    p.parts_[part_of[j]].push_back(static_cast<int>(j));
  }
  p.part_of_ = std::move(part_of);
  return p;
}

Partition Partition::FromParts(int n, std::vector<std::vector<int>> parts) {
  Partition p;
  p.part_of_.assign(n, -1);
  for (size_t t = 0; t < parts.size(); ++t) {
    for (int j : parts[t]) {
      if (j < 0 || j >= n) throw InvalidInput("part element out of range");
      if (p.part_of_[j] != -1) {
        throw InvalidInput("element " + std::to_string(j) +
                           " appears in two parts");
      }
      p.part_of_[j] = static_cast<int>(t);
    }
  }
  for (int j = 0; j < n; ++j) {
    if (p.part_of_[j] == -1) {
      throw InvalidInput("element " + std::to_string(j) + " not covered");
    }
  }
  p.parts_ = std::move(parts);
  return p;
}

Partition Partition::Trivial(int n) {
  return FromPartOf(n > 0 ? 1 : 0, std::vector<int>(n, 0));
}

Partition Partition::Singletons(int n) {
  std::vector<int> part_of(n);
  for (int j = 0; j < n; ++j) part_of[j] = j;
  return FromPartOf(n, std::move(part_of));
}

int Partition::max_part_size() const {
  size_t best = 0;
  for (const auto& q : parts_) best = std::max(best, q.size());
  return static_cast<int>(best);
}

Partition Partition::Compacted() const {
  std::vector<std::vector<int>> kept;
  for (const auto& q : parts_) {
    if (!q.empty()) kept.push_back(q);
  }
  return FromParts(n(), std::move(kept));
}

ImportanceVector ImportanceVector::Uniform(int m) {
  ImportanceVector v;
  v.log_w_.assign(m, 0.0);
  return v;
}

ImportanceVector ImportanceVector::FromLinear(const std::vector<double>& w) {
  ImportanceVector v;
  v.log_w_.resize(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) {
      throw InvalidInput("importance must be finite and nonnegative");
    }
    v.log_w_[i] = w[i] > 0.0 ? std::log(w[i])
                             : -std::numeric_limits<double>::infinity();
  }
  return v;
}

ImportanceVector ImportanceVector::FromLog(std::vector<double> log_w) {
  for (double x : log_w) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) {
      throw InvalidInput("log importance must be < +inf");
    }
  }
  ImportanceVector v;
  v.log_w_ = std::move(log_w);
  return v;
}

bool ImportanceVector::AllZero() const {
  for (double x : log_w_) {
    if (x != -std::numeric_limits<double>::infinity()) return false;
  }
  return true;
}

std::vector<double> ImportanceVector::Normalized() const {
  if (AllZero()) return std::vector<double>(log_w_.size(), 1.0);
  double top = -std::numeric_limits<double>::infinity();
  for (double x : log_w_) top = std::max(top, x);
  std::vector<double> w(log_w_.size());
  for (size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_w_[i] - top);
  return w;
}

bool DiscReport::Certified() const {
  return !bound.empty() && num_violations() == 0;
}

int DiscReport::num_violations() const {
  int bad = 0;
  for (size_t i = 0; i < bound.size(); ++i) {
    if (disc[i] > bound[i] * (1.0 + 1e-9) + 1e-12) ++bad;
  }
  return bad;
}

namespace {

void FinishReport(DiscReport& r, const std::vector<double>& norms) {
  const double log_m = LogHat(static_cast<double>(r.sdisc.size()));
  r.disc.resize(r.sdisc.size());
  r.ratio.resize(r.sdisc.size());
  for (size_t i = 0; i < r.sdisc.size(); ++i) {
    r.disc[i] = std::abs(r.sdisc[i]);
    r.ratio[i] = norms[i] > 0.0 ? r.disc[i] / std::sqrt(norms[i] * log_m) : 0.0;
    r.max_disc = std::max(r.max_disc, r.disc[i]);
    r.max_ratio = std::max(r.max_ratio, r.ratio[i]);
  }
}

}  // namespace

DiscReport Evaluate(const SetSystem& sets, const Assignment& chi) {
  CheckAssignment(chi, sets.n());
  DiscReport r;
  const int m = sets.num_sets();
  r.sdisc.resize(m);
  std::vector<double> norms(m);
  for (int i = 0; i < m; ++i) {
    int64_t s = 0;
    for (int j : sets.row(i)) s += chi[j];
    r.sdisc[i] = static_cast<double>(s);
    norms[i] = sets.row_size(i);
  }
  FinishReport(r, norms);
  return r;
}

DiscReport Evaluate(const WeightedSystem& a, const Assignment& chi) {
  CheckAssignment(chi, a.n());
  DiscReport r;
  const int m = a.num_rows();
  r.sdisc.resize(m);
  std::vector<double> terms;
  for (int i = 0; i < m; ++i) {
    auto c = a.cols(i);
    auto v = a.vals(i);
    terms.resize(c.size());
    for (size_t k = 0; k < c.size(); ++k) terms[k] = v[k] * chi[c[k]];
    r.sdisc[i] = PairwiseSum(terms);
  }
  FinishReport(r, a.row_norms());
  return r;
}

void AttachBound(DiscReport& report, std::vector<double> bound) {
  if (bound.size() != report.sdisc.size()) {
    throw InvalidInput("bound length does not match the number of rows");
  }
  report.bound = std::move(bound);
}

namespace {

std::vector<int> LocalIndex(int n, std::span<const int> part) {
  std::vector<int> local(n, -1);
  for (size_t k = 0; k < part.size(); ++k) {
    const int j = part[k];
    if (j < 0 || j >= n) throw InvalidInput("part element out of range");
    if (local[j] != -1) throw InvalidInput("part repeats an element");
    local[j] = static_cast<int>(k);
  }
  return local;
}

}  // namespace

Restricted<SetSystem> Restrict(const SetSystem& sets,
                               std::span<const int> part) {
  const std::vector<int> local = LocalIndex(sets.n(), part);
  std::vector<std::vector<int>> rows;
  Restricted<SetSystem> out;
  for (int i = 0; i < sets.num_sets(); ++i) {
    std::vector<int> r;
    for (int j : sets.row(i)) {
      if (local[j] >= 0) r.push_back(local[j]);
    }
    if (r.empty()) continue;
    rows.push_back(std::move(r));
    out.row_map.push_back(i);
  }
  out.system = SetSystem::FromRows(static_cast<int>(part.size()), rows);
  return out;
}

Restricted<WeightedSystem> Restrict(const WeightedSystem& a,
                                    std::span<const int> part) {
  const std::vector<int> local = LocalIndex(a.n(), part);
  std::vector<Triple> t;
  Restricted<WeightedSystem> out;
  for (int i = 0; i < a.num_rows(); ++i) {
    auto c = a.cols(i);
    auto v = a.vals(i);
    const int row = static_cast<int>(out.row_map.size());
    bool any = false;
    for (size_t k = 0; k < c.size(); ++k) {
      if (local[c[k]] < 0) continue;
      t.push_back({row, local[c[k]], v[k]});
      any = true;
    }
    if (any) out.row_map.push_back(i);
  }
  out.system = WeightedSystem::FromTriples(
      static_cast<int>(part.size()), static_cast<int>(out.row_map.size()),
      std::move(t));
  return out;
}

namespace {

std::vector<int> PositionInPart(const Partition& p) {
  std::vector<int> pos(p.n(), -1);
  for (int t = 0; t < p.num_parts(); ++t) {
    const auto& q = p.part(t);
    for (size_t k = 0; k < q.size(); ++k) pos[q[k]] = static_cast<int>(k);
  }
  return pos;
}

}  // namespace

std::vector<Restricted<SetSystem>> SplitByPartition(const SetSystem& sets,
                                                    const Partition& p) {
  if (p.n() != sets.n()) throw InvalidInput("partition size mismatch");
  const std::vector<int> pos = PositionInPart(p);
  const int parts = p.num_parts();
  std::vector<std::vector<std::vector<int>>> rows(parts);
  std::vector<Restricted<SetSystem>> out(parts);
  std::vector<int> last(parts, -1);
  for (int i = 0; i < sets.num_sets(); ++i) {
    for (int j : sets.row(i)) {
      const int t = p.part_of(j);
      if (last[t] != i) {
        last[t] = i;
        rows[t].emplace_back();
        out[t].row_map.push_back(i);
      }
      rows[t].back().push_back(pos[j]);
    }
  }
  for (int t = 0; t < parts; ++t) {
    out[t].system = SetSystem::FromRows(static_cast<int>(p.part(t).size()),
                                        rows[t]);
  }
  return out;
}

std::vector<Restricted<WeightedSystem>> SplitByPartition(
    const WeightedSystem& a, const Partition& p) {
  if (p.n() != a.n()) throw InvalidInput("partition size mismatch");
  const std::vector<int> pos = PositionInPart(p);
  const int parts = p.num_parts();
  std::vector<std::vector<Triple>> triples(parts);
  std::vector<Restricted<WeightedSystem>> out(parts);
  std::vector<int> last(parts, -1);
  for (int i = 0; i < a.num_rows(); ++i) {
    auto c = a.cols(i);
    auto v = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) {
      const int t = p.part_of(c[k]);
      if (last[t] != i) {
        last[t] = i;
        out[t].row_map.push_back(i);
      }
      triples[t].push_back(
          {static_cast<int>(out[t].row_map.size()) - 1, pos[c[k]], v[k]});
    }
  }
  for (int t = 0; t < parts; ++t) {
    out[t].system = WeightedSystem::FromTriples(
        static_cast<int>(p.part(t).size()),
        static_cast<int>(out[t].row_map.size()), std::move(triples[t]));
  }
  return out;
}

BruteForceResult BruteForceMinDisc(const SetSystem& sets, int cap) {
  const int n = sets.n();
  if (n > cap) {
    throw SizeError("exhaustive search refused for n = " + std::to_string(n) +
                    " > " + std::to_string(cap));
  }
  const int m = sets.num_sets();
  BruteForceResult best;
  best.chi.assign(n, 1);
  if (n == 0 || m == 0) return best;
  std::vector<std::vector<int>> rows_of(n);
  for (int i = 0; i < m; ++i) {
    for (int j : sets.row(i)) rows_of[j].push_back(i);
  }
  // chi_0 stays +1; negating everything gives the same discrepancy.
  std::vector<int64_t> sum(m);
  for (int i = 0; i < m; ++i) sum[i] = sets.row_size(i);
  Assignment chi(n, 1);
  auto current = [&]() {
    int64_t worst = 0;
    for (int64_t s : sum) worst = std::max(worst, s < 0 ? -s : s);
    return worst;
  };
  best.value = current();
  const uint64_t steps = n > 1 ? (uint64_t{1} << (n - 1)) : 1;
  for (uint64_t g = 1; g < steps && best.value > 0; ++g) {
    const int bit = __builtin_ctzll(g) + 1;
    chi[bit] = static_cast<int8_t>(-chi[bit]);
    for (int i : rows_of[bit]) sum[i] += 2 * chi[bit];
    const int64_t v = current();
    if (v < best.value) {
      best.value = v;
      best.chi = chi;
    }
  }
  return best;
}

Assignment Mix(const Assignment& chi, const Partition& p,
               const Assignment& signs) {
  CheckAssignment(chi, p.n());
  CheckAssignment(signs, p.num_parts());
  Assignment out(chi.size());
  for (size_t j = 0; j < chi.size(); ++j) {
    out[j] = static_cast<int8_t>(chi[j] * signs[p.part_of(static_cast<int>(j))]);
  }
  return out;
}

}  // namespace discbal
