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

// Evaluation code for `verify` and the bench. It deliberately shares nothing
// with the solver library beyond the container types: sums are compensated
// long double loops, and bounds come from the report under test.

#include <cmath>
#include <set>
#include <string>

#include "cli.h"

namespace discbal::cli {
namespace {

constexpr long double kRelTol = 1e-9L;
constexpr long double kAbsTol = 1e-12L;

// Neumaier-compensated sum.
class Accumulator {
 public:
  void Add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  long double Value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

void CheckLength(VerifyOutcome& v, size_t got, size_t want, const char* what) {
  if (got != want) {
    v.ok = false;
    v.failures.push_back(std::string(what) + " has length " + std::to_string(got) +
                         ", expected " + std::to_string(want));
  }
}

void CheckSigns(VerifyOutcome& v, const Assignment& chi) {
  for (size_t j = 0; j < chi.size(); ++j) {
    if (chi[j] != 1 && chi[j] != -1) {
      v.ok = false;
      v.failures.push_back("entry " + std::to_string(j) + " is not +1 or -1");
    }
  }
}

// Compares recomputed row values against the report's claims and bounds.
void CheckAgainstReport(VerifyOutcome& v, const std::vector<long double>& disc,
                        const nlohmann::json* report) {
  v.rows = static_cast<int>(disc.size());
  for (long double d : disc) v.max_disc = std::max(v.max_disc, static_cast<double>(d));
  if (report == nullptr) return;
  const nlohmann::json& r = report->contains("report") ? report->at("report") : *report;
  if (r.contains("disc")) {
    const auto& claimed = r.at("disc");
    CheckLength(v, claimed.size(), disc.size(), "reported disc");
    for (size_t i = 0; i < std::min(claimed.size(), disc.size()); ++i) {
      const long double c = claimed[i].get<double>();
      if (std::fabs(c - disc[i]) > kRelTol * std::max(c, disc[i]) + kAbsTol) {
        v.ok = false;
        v.failures.push_back("row " + std::to_string(i) + ": reported disc " +
                             std::to_string(static_cast<double>(c)) +
                             " but recomputed " +
                             std::to_string(static_cast<double>(disc[i])));
      }
    }
  }
  if (r.contains("bound") && !r.at("bound").empty()) {
    const auto& bound = r.at("bound");
    CheckLength(v, bound.size(), disc.size(), "certificate");
    for (size_t i = 0; i < std::min(bound.size(), disc.size()); ++i) {
      const long double b = bound[i].get<double>();
      if (disc[i] > b * (1.0L + kRelTol) + kAbsTol) {
        v.ok = false;
        v.failures.push_back("row " + std::to_string(i) + ": disc " +
                             std::to_string(static_cast<double>(disc[i])) +
                             " exceeds certificate " +
                             std::to_string(static_cast<double>(b)));
      }
    }
  }
}

}  // namespace

nlohmann::json VerifyOutcome::ToJson() const {
  return {{"ok", ok}, {"rows", rows}, {"max_disc", max_disc}, {"failures", failures}};
}

VerifyOutcome VerifySets(const SetSystem& sets, const Assignment& chi,
                         const nlohmann::json* report) {
  VerifyOutcome v;
  CheckLength(v, chi.size(), sets.n(), "assignment");
  if (!v.ok) return v;
  CheckSigns(v, chi);
  std::vector<long double> disc(sets.num_sets());
  for (int i = 0; i < sets.num_sets(); ++i) {
    long long s = 0;
    for (int j : sets.row(i)) s += chi[j];
    disc[i] = std::llabs(s);
  }
  CheckAgainstReport(v, disc, report);
  return v;
}

VerifyOutcome VerifyWeighted(const WeightedSystem& a, const Assignment& chi,
                             const nlohmann::json* report) {
  VerifyOutcome v;
  CheckLength(v, chi.size(), a.n(), "assignment");
  if (!v.ok) return v;
  CheckSigns(v, chi);
  std::vector<long double> disc(a.num_rows());
  for (int i = 0; i < a.num_rows(); ++i) {
    Accumulator acc;
    auto c = a.cols(i);
    auto x = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) acc.Add(static_cast<long double>(x[k]) * chi[c[k]]);
    disc[i] = std::fabs(acc.Value());
  }
  CheckAgainstReport(v, disc, report);
  return v;
}

VerifyOutcome VerifyLattice(const WeightedSystem& a,
                            const std::vector<double>& p,
                            const std::vector<int>& q,
                            const nlohmann::json* report) {
  VerifyOutcome v;
  CheckLength(v, p.size(), a.n(), "p");
  CheckLength(v, q.size(), a.n(), "q");
  if (!v.ok) return v;
  for (size_t j = 0; j < q.size(); ++j) {
    if (q[j] != 0 && q[j] != 1) {
      v.ok = false;
      v.failures.push_back("q[" + std::to_string(j) + "] is not 0 or 1");
    } else if ((p[j] == 0.0 || p[j] == 1.0) && q[j] != p[j]) {
      v.ok = false;
      v.failures.push_back("q[" + std::to_string(j) + "] moved an integral p");
    }
  }
  std::vector<long double> err(a.num_rows());
  for (int i = 0; i < a.num_rows(); ++i) {
    Accumulator acc;
    auto c = a.cols(i);
    auto x = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) {
      acc.Add(static_cast<long double>(x[k]) * (q[c[k]] - static_cast<long double>(p[c[k]])));
    }
    err[i] = std::fabs(acc.Value());
  }
  nlohmann::json claims;
  if (report != nullptr) {
    const nlohmann::json& r = report->contains("report") ? report->at("report") : *report;
    if (r.contains("error")) claims["disc"] = r.at("error");
    if (r.contains("certificate")) claims["bound"] = r.at("certificate");
  }
  CheckAgainstReport(v, err, report != nullptr ? &claims : nullptr);
  return v;
}

VerifyOutcome VerifyColoring(int n, const std::vector<std::pair<int, int>>& edges,
                             const std::vector<int>& colors) {
  VerifyOutcome v;
  CheckLength(v, colors.size(), edges.size(), "coloring");
  if (!v.ok) return v;
  std::set<std::pair<int, int>> used;
  for (size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    if (a < 0 || b < 0 || a >= n || b >= n || colors[e] < 0) {
      v.ok = false;
      v.failures.push_back("edge " + std::to_string(e) + " is malformed");
      continue;
    }
    for (int x : {a, b}) {
      if (!used.insert({x, colors[e]}).second) {
        v.ok = false;
        v.failures.push_back("color " + std::to_string(colors[e]) +
                             " repeats at vertex " + std::to_string(x));
      }
    }
  }
  v.rows = static_cast<int>(edges.size());
  return v;
}

double IndependentMaxRatio(const WeightedSystem& a, const Assignment& chi) {
  const long double log_m = std::log(std::max(a.num_rows(), 2));
  long double best = 0.0L;
  for (int i = 0; i < a.num_rows(); ++i) {
    Accumulator sum;
    Accumulator norm;
    auto c = a.cols(i);
    auto x = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) {
      sum.Add(static_cast<long double>(x[k]) * chi[c[k]]);
      norm.Add(static_cast<long double>(x[k]) * x[k]);
    }
    if (norm.Value() <= 0.0L) continue;
    best = std::max(best, std::fabs(sum.Value()) / std::sqrt(norm.Value() * log_m));
  }
  return static_cast<double>(best);
}

}  // namespace discbal::cli
