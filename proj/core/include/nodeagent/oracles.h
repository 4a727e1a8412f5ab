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

#ifndef NODEAGENT_ORACLES_H_
#define NODEAGENT_ORACLES_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "nodeagent/answer.h"
#include "nodeagent/graph.h"

namespace nodeagent {

// Sequential reference algorithms. They share no code with the vertex
// programs and are the comparison standard in tests and benchmark suites.

// Dijkstra from source, one entry per node in node_ids() order.
// Unweighted graphs use unit weights. Throws NegativeWeight, UnknownNode.
DistanceMap OracleShortestPaths(const Graph& g, NodeId source);

// Breadth-first reachability along out-edges.
std::vector<bool> OracleReachable(const Graph& g, NodeId source);

// Union-find over the edges, ignoring direction.
bool OracleConnected(const Graph& g, NodeId a, NodeId b);

// Depth-first back-edge detection. Undirected graphs ignore the edge to the
// parent; a self-loop is a cycle.
bool OracleHasCycle(const Graph& g);

// Breadth-first two-coloring of the undirected view.
bool OracleBipartite(const Graph& g);

// Union-find on the bipartite double cover of the undirected view.
bool OracleHasOddCycle(const Graph& g);

// Kahn's algorithm, smallest available id first. Throws NotADAG.
std::vector<NodeId> OracleTopologicalOrder(const Graph& g);

// True when `order` lists every node exactly once and every edge u->v has
// u before v.
bool VerifyTopologicalOrder(const Graph& g, const std::vector<NodeId>& order);

// Maximum node-weight sum over all mutually adjacent triples; nullopt when
// the graph has no triangle. Missing node weights count as zero.
std::optional<double> OracleMaxTriangleSum(const Graph& g);

struct FlowOracleResult {
  double value = 0;
  std::vector<NodeId> source_side;
  double cut_capacity = 0;
};

// Sequential Edmonds-Karp with a residual-reachability minimum cut.
// Undirected edges carry capacity both ways.
FlowOracleResult OracleMaxFlow(const Graph& g, NodeId source, NodeId sink);

// Dense power iteration with uniform redistribution of dangling mass,
// iterated until the L1 change drops below `tolerance`.
std::vector<double> OraclePageRank(const Graph& g, double damping = 0.85,
                                   double tolerance = 1e-14,
                                   std::size_t max_iterations = 100000);

// Exact Hamiltonian path test by dynamic programming over visited subsets.
// Throws SizeOutOfRange above kMaxHamiltonOracleNodes.
inline constexpr std::size_t kMaxHamiltonOracleNodes = 24;
bool OracleHamiltonPath(const Graph& g);

}  // namespace nodeagent

#endif  // NODEAGENT_ORACLES_H_
