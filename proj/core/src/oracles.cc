// Copyright 2026 The nodeagent Authors
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

#include "nodeagent/oracles.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "nodeagent/errors.h"

namespace nodeagent {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

void Require(const Graph& g, NodeId v) {
  if (!g.contains(v)) {
    throw Error(ErrorCode::kUnknownNode, "node " + std::to_string(v) + " is not in the graph");
  }
}

// Undirected adjacency by dense index, self-loops kept once.
std::vector<std::vector<std::size_t>> UndirectedAdjacency(const Graph& g) {
  std::vector<std::vector<std::size_t>> adj(g.node_count());
  for (const Edge& e : g.edges()) {
    std::size_t u = g.index_of(e.src), v = g.index_of(e.dst);
    adj[u].push_back(v);
    if (u != v) adj[v].push_back(u);
  }
  return adj;
}

}  // namespace

DistanceMap OracleShortestPaths(const Graph& g, NodeId source) {
  Require(g, source);
  const std::size_t n = g.node_count();
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<bool> done(n, false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[g.index_of(source)] = 0;
  heap.emplace(0.0, g.index_of(source));
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = true;
    for (const Neighbor& nb : g.neighbors(g.node_ids()[u])) {
      double w = g.weighted() ? nb.weight.value_or(1.0) : 1.0;
      if (w < 0) {
        throw Error(ErrorCode::kNegativeWeight, "negative edge weight");
      }
      std::size_t v = g.index_of(nb.id);
      if (d + w < dist[v]) {
        dist[v] = d + w;
        heap.emplace(dist[v], v);
      }
    }
  }
  DistanceMap out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back(g.node_ids()[i],
                     std::isinf(dist[i]) ? std::nullopt : std::optional<double>(dist[i]));
  }
  return out;
}

std::vector<bool> OracleReachable(const Graph& g, NodeId source) {
  Require(g, source);
  std::vector<bool> seen(g.node_count(), false);
  std::deque<NodeId> queue{source};
  seen[g.index_of(source)] = true;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : g.neighbors(u)) {
      std::size_t v = g.index_of(nb.id);
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(nb.id);
      }
    }
  }
  return seen;
}

bool OracleConnected(const Graph& g, NodeId a, NodeId b) {
  Require(g, a);
  Require(g, b);
  DisjointSets sets(g.node_count());
  for (const Edge& e : g.edges()) sets.Union(g.index_of(e.src), g.index_of(e.dst));
  return sets.Find(g.index_of(a)) == sets.Find(g.index_of(b));
}

bool OracleHasCycle(const Graph& g) {
  const std::size_t n = g.node_count();
  // 0 = unvisited, 1 = on stack, 2 = finished.
  std::vector<int> color(n, 0);
  if (g.directed()) {
    for (std::size_t root = 0; root < n; ++root) {
      if (color[root]) continue;
      std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
      color[root] = 1;
      while (!stack.empty()) {
        auto& [u, next] = stack.back();
        auto nbrs = g.neighbors(g.node_ids()[u]);
        if (next == nbrs.size()) {
          color[u] = 2;
          stack.pop_back();
          continue;
        }
        std::size_t v = g.index_of(nbrs[next++].id);
        if (color[v] == 1) return true;
        if (color[v] == 0) {
          color[v] = 1;
          stack.emplace_back(v, 0);
        }
      }
    }
    return false;
  }
  auto adj = UndirectedAdjacency(g);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : adj[u]) {
      if (u == v) return true;
    }
  }
  std::vector<std::size_t> parent(n, n);
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next == adj[u].size()) {
        color[u] = 2;
        stack.pop_back();
        continue;
      }
      std::size_t v = adj[u][next++];
      if (v == parent[u]) continue;
      if (color[v] != 0) return true;
      color[v] = 1;
      parent[v] = u;
      stack.emplace_back(v, 0);
    }
  }
  return false;
}

bool OracleBipartite(const Graph& g) {
  const std::size_t n = g.node_count();
  auto adj = UndirectedAdjacency(g);
  std::vector<int> side(n, -1);
  for (std::size_t root = 0; root < n; ++root) {
    if (side[root] >= 0) continue;
    side[root] = 0;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (side[v] < 0) {
          side[v] = 1 - side[u];
          queue.push_back(v);
        } else if (side[v] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool OracleHasOddCycle(const Graph& g) {
  const std::size_t n = g.node_count();
  DisjointSets sets(2 * n);
  for (const Edge& e : g.edges()) {
    std::size_t u = g.index_of(e.src), v = g.index_of(e.dst);
    sets.Union(2 * u, 2 * v + 1);
    sets.Union(2 * u + 1, 2 * v);
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (sets.Find(2 * u) == sets.Find(2 * u + 1)) return true;
  }
  return false;
}

std::vector<NodeId> OracleTopologicalOrder(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> indegree(n, 0);
  for (const Edge& e : g.edges()) {
    ++indegree[g.index_of(e.dst)];
    if (!g.directed()) ++indegree[g.index_of(e.src)];
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(g.node_ids()[i]);
  }
  std::vector<NodeId> order;
  while (!ready.empty()) {
    NodeId u = ready.top();
    ready.pop();
    order.push_back(u);
    for (const Neighbor& nb : g.neighbors(u)) {
      if (--indegree[g.index_of(nb.id)] == 0) ready.push(nb.id);
    }
  }
  if (order.size() != n) {
    throw Error(ErrorCode::kNotADag, "the graph contains a directed cycle");
  }
  return order;
}

bool VerifyTopologicalOrder(const Graph& g, const std::vector<NodeId>& order) {
  if (order.size() != g.node_count()) return false;
  std::vector<std::size_t> position(g.node_count(), g.node_count());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!g.contains(order[i])) return false;
    std::size_t idx = g.index_of(order[i]);
    if (position[idx] != g.node_count()) return false;
    position[idx] = i;
  }
  for (const Edge& e : g.edges()) {
    if (position[g.index_of(e.src)] >= position[g.index_of(e.dst)]) return false;
  }
  return true;
}

std::optional<double> OracleMaxTriangleSum(const Graph& g) {
  const auto ids = g.node_ids();
  const std::size_t n = ids.size();
  std::optional<double> best;
  auto weight = [&](NodeId v) { return g.node_weight(v).value_or(0.0); };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!g.adjacent(ids[a], ids[b])) continue;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (!g.adjacent(ids[a], ids[c]) || !g.adjacent(ids[b], ids[c])) continue;
        double sum = weight(ids[a]) + weight(ids[b]) + weight(ids[c]);
        if (!best || sum > *best) best = sum;
      }
    }
  }
  return best;
}

FlowOracleResult OracleMaxFlow(const Graph& g, NodeId source, NodeId sink) {
  Require(g, source);
  Require(g, sink);
  if (source == sink) {
    throw Error(ErrorCode::kSourceEqualsSink, "source and sink are the same node");
  }
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> cap(n, std::vector<double>(n, 0.0));
  for (const Edge& e : g.edges()) {
    double c = e.weight.value_or(1.0);
    if (c < 0) throw Error(ErrorCode::kNegativeCapacity, "negative capacity");
    std::size_t u = g.index_of(e.src), v = g.index_of(e.dst);
    if (u == v) continue;
    cap[u][v] += c;
    if (!g.directed()) cap[v][u] += c;
  }
  const auto original = cap;
  const std::size_t s = g.index_of(source), t = g.index_of(sink);
  FlowOracleResult result;
  std::vector<std::size_t> parent(n);
  auto bfs = [&]() {
    std::fill(parent.begin(), parent.end(), n);
    parent[s] = s;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] == n && cap[u][v] > 0) {
          parent[v] = u;
          queue.push_back(v);
        }
      }
    }
    return parent[t] != n;
  };
  while (bfs()) {
    double bottleneck = std::numeric_limits<double>::infinity();
    for (std::size_t v = t; v != s; v = parent[v]) {
      bottleneck = std::min(bottleneck, cap[parent[v]][v]);
    }
    for (std::size_t v = t; v != s; v = parent[v]) {
      cap[parent[v]][v] -= bottleneck;
      cap[v][parent[v]] += bottleneck;
    }
    result.value += bottleneck;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (parent[v] != n) result.source_side.push_back(g.node_ids()[v]);
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (parent[u] == n) continue;
    for (std::size_t v = 0; v < n; ++v) {
      if (parent[v] == n) result.cut_capacity += original[u][v];
    }
  }
  return result;
}

std::vector<double> OraclePageRank(const Graph& g, double damping, double tolerance,
                                   std::size_t max_iterations) {
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  std::vector<double> rank(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double dangling = 0;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      auto out = g.neighbors(g.node_ids()[u]);
      if (out.empty()) {
        dangling += rank[u];
        continue;
      }
      double share = rank[u] / static_cast<double>(out.size());
      for (const Neighbor& nb : out) next[g.index_of(nb.id)] += share;
    }
    double change = 0;
    for (std::size_t v = 0; v < n; ++v) {
      double value = (1.0 - damping) / static_cast<double>(n) +
                     damping * (next[v] + dangling / static_cast<double>(n));
      change += std::fabs(value - rank[v]);
      next[v] = value;
    }
    rank.swap(next);
    if (change < tolerance) break;
  }
  return rank;
}

bool OracleHamiltonPath(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > kMaxHamiltonOracleNodes) {
    throw Error(ErrorCode::kSizeOutOfRange,
                "exact Hamiltonian path search is limited to " +
                    std::to_string(kMaxHamiltonOracleNodes) + " nodes");
  }
  if (n <= 1) return true;
  std::vector<std::uint32_t> next(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (const Neighbor& nb : g.neighbors(g.node_ids()[u])) {
      std::size_t v = g.index_of(nb.id);
      if (v != u) next[u] |= std::uint32_t{1} << v;
    }
  }
  // ends[mask]: nodes at which some simple path covering exactly `mask` ends.
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint32_t> ends(std::size_t{1} << n, 0);
  for (std::size_t v = 0; v < n; ++v) ends[std::size_t{1} << v] = std::uint32_t{1} << v;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t e = ends[mask];
    while (e) {
      std::size_t v = static_cast<std::size_t>(__builtin_ctz(e));
      e &= e - 1;
      std::uint32_t grow = next[v] & ~mask;
      while (grow) {
        std::size_t w = static_cast<std::size_t>(__builtin_ctz(grow));
        grow &= grow - 1;
        ends[mask | (std::uint32_t{1} << w)] |= std::uint32_t{1} << w;
      }
    }
  }
  return ends[full] != 0;
}

}  // namespace nodeagent
