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


#include "discbal/edgecolor.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "discbal/generate.h"
#include "discbal/profile.h"
#include "doctest.h"

namespace discbal {
namespace {

// Exhaustive properness check written against the raw edge list.
bool Proper(int n, const std::vector<std::pair<int, int>>& edges,
            const std::vector<int>& color) {
  std::vector<std::set<int>> used(n);
  for (size_t e = 0; e < edges.size(); ++e) {
    if (color[e] < 0) return false;
    if (!used[edges[e].first].insert(color[e]).second) return false;
    if (!used[edges[e].second].insert(color[e]).second) return false;
  }
  return true;
}

int Colors(const std::vector<int>& color) {
  return color.empty() ? 0 : *std::max_element(color.begin(), color.end()) + 1;
}

std::vector<std::pair<int, int>> RandomBipartite(std::mt19937_64& rng, int half,
                                                 int d) {
  // Union of d random perfect matchings, repeats dropped.
  std::set<std::pair<int, int>> e;
  std::vector<int> perm(half);
  for (int r = 0; r < d; ++r) {
    for (int i = 0; i < half; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < half; ++i) e.insert({i, half + perm[i]});
  }
  return {e.begin(), e.end()};
}

TEST_CASE("Graph validation") {
  Graph g = Graph::FromEdges(4, {{2, 1}, {0, 3}});
  CHECK(g.edge(0) == std::pair<int, int>{1, 2});
  CHECK(g.max_degree() == 1);
  CHECK_THROWS_AS(Graph::FromEdges(3, {{1, 1}}), InvalidInput);
  CHECK_THROWS_AS(Graph::FromEdges(3, {{0, 1}, {1, 0}}), InvalidInput);
  CHECK_THROWS_AS(Graph::FromEdges(3, {{0, 3}}), InvalidInput);
}

TEST_CASE("IsProperColoring catches conflicts") {
  Graph g = Graph::FromEdges(3, {{0, 1}, {1, 2}});
  CHECK(IsProperColoring(g, {{0, 1}, 2}));
  CHECK_FALSE(IsProperColoring(g, {{0, 0}, 1}));
  CHECK_FALSE(IsProperColoring(g, {{0, 2}, 2}));
}

TEST_CASE("MisraGries uses at most Delta + 1 colors") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 40;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (rng() % 3 == 0) edges.push_back({u, v});
      }
    }
    Graph g = Graph::FromEdges(n, edges);
    EdgeColoring c = MisraGries(g);
    CHECK(Proper(n, g.edges(), c.color));
    CHECK(c.num_colors <= g.max_degree() + 1);
  }
  // Odd cycle needs three colors.
  Graph c5 = Graph::FromEdges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  CHECK(MisraGries(c5).num_colors == 3);
}

TEST_CASE("bipartite coloring is exact") {
  Graph match = Graph::FromEdges(4, {{0, 2}, {1, 3}});
  CHECK(ColorBipartite(match).num_colors == 1);
  std::vector<std::pair<int, int>> k33;
  for (int u = 0; u < 3; ++u) {
    for (int v = 3; v < 6; ++v) k33.push_back({u, v});
  }
  EdgeColoring c = ColorBipartite(Graph::FromEdges(6, k33));
  CHECK(c.num_colors == 3);
  CHECK(Proper(6, Graph::FromEdges(6, k33).edges(), c.color));
  std::mt19937_64 rng(52);
  Graph g = Graph::FromEdges(400, RandomBipartite(rng, 200, 16));
  EdgeColoring b = ColorBipartite(g);
  CHECK(b.num_colors == g.max_degree());
  CHECK(Proper(400, g.edges(), b.color));
  Graph c5 = Graph::FromEdges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  CHECK_THROWS_AS(ColorBipartite(c5), InvalidInput);
  CHECK_THROWS_AS(ColorBipartite(match, {0, 1, 0, 1}), InvalidInput);
}

TEST_CASE("ColorEdges on regular graphs") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  for (int d : {3, 16, 40}) {
    const int n = 600;
    Graph g = Graph::FromEdges(n, GenerateRegularGraph(n, d, 9));
    ColorEdgesResult r = ColorEdges(g, profile);
    CHECK(Proper(n, g.edges(), r.coloring.color));
    CHECK(r.coloring.num_colors == Colors(r.coloring.color));
    CHECK(r.coloring.num_colors >= d);
    CHECK(r.bipartite_exact);
    CHECK(r.degree_split_ok);
    CHECK(r.k3 == doctest::Approx((r.coloring.num_colors - d) /
                                  std::sqrt(d * std::log(n))));
  }
}

TEST_CASE("ColorEdges trivial graphs") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  ColorEdgesResult empty = ColorEdges(Graph::FromEdges(3, {}), profile);
  CHECK(empty.coloring.num_colors == 0);
  ColorEdgesResult one = ColorEdges(Graph::FromEdges(2, {{0, 1}}), profile);
  CHECK(one.coloring.num_colors == 1);
}

}  // namespace
}  // namespace discbal
