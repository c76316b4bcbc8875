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

#include "discbal/generate.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "discbal/parallel.h"

namespace discbal {
namespace {

// k distinct values of [0, n), sorted (Floyd's algorithm).
std::vector<int> SampleDistinct(int n, int k, std::mt19937_64& rng) {
  if (k >= n) {
    std::vector<int> all(n);
    for (int j = 0; j < n; ++j) all[j] = j;
    return all;
  }
  std::unordered_set<int> chosen;
  chosen.reserve(k * 2);
  for (int r = n - k; r < n; ++r) {
    const int t = std::uniform_int_distribution<int>(0, r)(rng);
    if (!chosen.insert(t).second) chosen.insert(r);
  }
  std::vector<int> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

double Draw(WeightDist dist, std::mt19937_64& rng) {
  switch (dist) {
    case WeightDist::kGaussian:
      return std::normal_distribution<double>(0.0, 1.0)(rng);
    case WeightDist::kLognormal: {
      const double mag = std::lognormal_distribution<double>(0.0, 1.5)(rng);
      return std::bernoulli_distribution(0.5)(rng) ? mag : -mag;
    }
    case WeightDist::kPowerLaw: {
      // Pareto with tail index 1.5.
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const double mag = std::pow(1.0 - u, -1.0 / 1.5);
      return std::bernoulli_distribution(0.5)(rng) ? mag : -mag;
    }
    case WeightDist::kUniform:
      return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  }
  return 0.0;
}

uint64_t EdgeKey(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<uint64_t>(u) << 32) | static_cast<uint32_t>(v);
}

}  // namespace

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 StreamRng(uint64_t seed, uint64_t stream) {
  return std::mt19937_64(SplitMix64(SplitMix64(seed) ^ SplitMix64(~stream)));
}

SetSystem GenerateSets(int n, int m, int s, uint64_t seed) {
  if (n < 0 || m < 0 || s < 0) throw InvalidInput("sizes must be nonnegative");
  std::vector<std::vector<int>> rows(m);
  ParallelFor(m, [&](int i) {
    std::mt19937_64 rng = StreamRng(seed, i);
    rows[i] = SampleDistinct(n, std::min(s, n), rng);
  });
  return SetSystem::FromRows(n, rows);
}

WeightDist ParseWeightDist(const std::string& name) {
  if (name == "gaussian") return WeightDist::kGaussian;
  if (name == "lognormal") return WeightDist::kLognormal;
  if (name == "powerlaw") return WeightDist::kPowerLaw;
  if (name == "uniform") return WeightDist::kUniform;
  throw InvalidInput("unknown weight distribution '" + name + "'");
}

std::string WeightDistName(WeightDist d) {
  switch (d) {
    case WeightDist::kGaussian: return "gaussian";
    case WeightDist::kLognormal: return "lognormal";
    case WeightDist::kPowerLaw: return "powerlaw";
    case WeightDist::kUniform: return "uniform";
  }
  return "";
}

WeightedSystem GenerateWeighted(int n, int m, int row_nnz, WeightDist dist,
                                uint64_t seed) {
  if (n < 0 || m < 0 || row_nnz < 0) throw InvalidInput("sizes must be nonnegative");
  std::vector<std::vector<Triple>> rows(m);
  ParallelFor(m, [&](int i) {
    std::mt19937_64 rng = StreamRng(seed, i);
    for (int j : SampleDistinct(n, std::min(row_nnz, n), rng)) {
      double v = 0.0;
      while (v == 0.0) v = Draw(dist, rng);
      rows[i].push_back({i, j, v});
    }
  });
  std::vector<Triple> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  return WeightedSystem::FromTriples(n, m, std::move(all));
}

LatticeInstance GenerateLattice(int n, int m, uint64_t seed) {
  if (n < 1 || m < 0) throw InvalidInput("sizes must be positive");
  LatticeInstance inst;
  std::mt19937_64 prng = StreamRng(seed, ~uint64_t{0});
  inst.p.resize(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const double u = unit(prng);
    if (u < 0.1) inst.p[j] = 0.0;
    else if (u < 0.2) inst.p[j] = 1.0;
    else inst.p[j] = unit(prng);
  }
  std::vector<std::vector<Triple>> rows(m);
  const double lo = std::log(8.0);
  const double hi = std::log(std::max(8.0, static_cast<double>(n)));
  ParallelFor(m, [&](int i) {
    std::mt19937_64 rng = StreamRng(seed, i);
    const double t = m > 1 ? static_cast<double>(i) / (m - 1) : 0.0;
    const int k = std::min(n, static_cast<int>(std::lround(std::exp(lo + t * (hi - lo)))));
    for (int j : SampleDistinct(n, k, rng)) {
      double v = 0.0;
      while (v == 0.0) v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      rows[i].push_back({i, j, v});
    }
  });
  std::vector<Triple> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  inst.a = WeightedSystem::FromTriples(n, m, std::move(all));
  return inst;
}

std::vector<std::pair<int, int>> GenerateRegularGraph(int n, int d,
                                                      uint64_t seed) {
  if (n < 0 || d < 0 || d >= std::max(n, 1) ||
      (static_cast<int64_t>(n) * d) % 2 != 0) {
    throw InvalidInput("a d-regular graph needs d < n and n d even");
  }
  std::mt19937_64 rng = StreamRng(seed, 0);
  std::vector<int> stubs;
  stubs.reserve(static_cast<size_t>(n) * d);
  for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::vector<std::pair<int, int>> edges;
  std::unordered_map<uint64_t, int> count;
  count.reserve(stubs.size());
  for (size_t k = 0; k + 1 < stubs.size(); k += 2) {
    edges.emplace_back(stubs[k], stubs[k + 1]);
    ++count[EdgeKey(stubs[k], stubs[k + 1])];
  }
  auto bad = [&](const std::pair<int, int>& e) {
    return e.first == e.second || count[EdgeKey(e.first, e.second)] > 1;
  };
  const int num_edges = static_cast<int>(edges.size());
  std::uniform_int_distribution<int> pick(0, std::max(0, num_edges - 1));
  for (int pass = 0;; ++pass) {
    std::vector<int> todo;
    for (int e = 0; e < num_edges; ++e) {
      if (bad(edges[e])) todo.push_back(e);
    }
    if (todo.empty()) break;
    if (pass > 1000) throw ContractViolation("regular graph repair did not converge");
    for (int e : todo) {
      if (!bad(edges[e])) continue;
      for (int attempt = 0; attempt < 100; ++attempt) {
        const int f = pick(rng);
        if (f == e) continue;
        auto [a, b] = edges[e];
        auto [c, dd] = edges[f];
        if (rng() & 1) std::swap(c, dd);
        if (a == c || b == dd) continue;
        if (count[EdgeKey(a, c)] > 0 || count[EdgeKey(b, dd)] > 0) continue;
        if (EdgeKey(a, c) == EdgeKey(b, dd)) continue;
        --count[EdgeKey(a, b)];
        --count[EdgeKey(edges[f].first, edges[f].second)];
        edges[e] = {a, c};
        edges[f] = {b, dd};
        ++count[EdgeKey(a, c)];
        ++count[EdgeKey(b, dd)];
        break;
      }
    }
  }
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace discbal
