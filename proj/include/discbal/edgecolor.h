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


// Edge coloring with Delta + O(sqrt(Delta ln n)) colors: split the vertices
// with the set balancer on neighborhoods, color the cut with exactly its
// maximum degree by alternating paths, and recurse on both sides with a
// shared palette. Small degrees fall back to Misra-Gries.

#ifndef DISCBAL_EDGECOLOR_H_
#define DISCBAL_EDGECOLOR_H_

#include <utility>
#include <vector>

#include "discbal/profile.h"
#include "json.hpp"

namespace discbal {

class Graph {
 public:
  Graph() = default;
  // Simple undirected graph; self-loops and repeated edges are rejected.
  // Edges are stored with u < v in the given order.
  static Graph FromEdges(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::pair<int, int>& edge(int e) const { return edges_[e]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  int max_degree() const { return max_degree_; }
  // Incident edge ids, in insertion order.
  const std::vector<int>& incident(int v) const { return adj_[v]; }

 private:
  int n_ = 0;
  int max_degree_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

struct EdgeColoring {
  std::vector<int> color;  // Per edge id.
  int num_colors = 0;      // max color + 1.
};

// True when every edge has a color in [0, num_colors) and no two edges at a
// vertex share one.
bool IsProperColoring(const Graph& g, const EdgeColoring& c);

// Delta + 1 colors.
EdgeColoring MisraGries(const Graph& g);

// Exactly max-degree colors. side[v] in {0, 1} and every edge must join the
// two sides.
EdgeColoring ColorBipartite(const Graph& g, const std::vector<int>& side);
// Finds the two sides by BFS; throws InvalidInput when g is not bipartite.
EdgeColoring ColorBipartite(const Graph& g);

struct ColorEdgesResult {
  EdgeColoring coloring;
  double k3 = 0.0;  // (colors - Delta) / sqrt(Delta ln n_hat).
  bool degree_split_ok = true;
  bool bipartite_exact = true;  // Every cut used exactly its max degree.
  nlohmann::json telemetry;
};

ColorEdgesResult ColorEdges(const Graph& g, const ConstantsProfile& profile);

}  // namespace discbal

#endif  // DISCBAL_EDGECOLOR_H_
