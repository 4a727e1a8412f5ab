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

#ifndef NODEAGENT_PROGRAMS_H_
#define NODEAGENT_PROGRAMS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nodeagent/graph.h"
#include "nodeagent/vertex_program.h"

namespace nodeagent {

// Distributed Bellman-Ford. State {distance}; message {new_distance}.
// Unweighted graphs use unit weights. Throws NegativeWeight, UnknownNode.
VertexProgram ShortestPathProgram(const Graph& g, NodeId source);

// Flood from source. State {reached}. The answer is reached(target).
VertexProgram ConnectivityProgram(const Graph& g, NodeId source, NodeId target);

// Leaf pruning (undirected) or source pruning on in-degree (directed).
// State {active, current_degree}; a cycle exists iff some node stays active.
VertexProgram CycleDetectionProgram(const Graph& g);

// Two-coloring flood seeded at the minimum-id node; the master re-seeds
// the minimum-id uncolored node whenever a round quiesces. Requires an
// undirected graph (see AsUndirected).
VertexProgram BipartiteProgram(const Graph& g);

// Kahn layering. State {remaining_in_degree, layer}. Requires a directed
// graph; nodes left without a layer mean the graph is not a DAG.
VertexProgram TopologicalSortProgram(const Graph& g);

// Maximum node-weight sum over triangles. Round 1 broadcasts weight and
// neighbor set; round 2 closes triangles locally. Requires node weights and
// an undirected graph without edge weights.
VertexProgram TriangleSumProgram(const Graph& g);

// Breadth-first flood recording parent pointers. When `stop_at` is set the
// run terminates as soon as that node is reached.
VertexProgram ReachabilityTreeProgram(const Graph& g, NodeId source,
                                      std::optional<NodeId> stop_at);

struct PageRankOptions {
  double damping = 0.85;
  double epsilon = 1e-6;
  std::size_t max_iterations = 100;
};

// State {rank, delta}. Dangling mass is redistributed uniformly through a
// barrier aggregate. Terminates when max |delta| < epsilon.
VertexProgram PageRankProgram(const Graph& g, const PageRankOptions& options = {});

// Path-length flood heuristic for Hamiltonian paths. Not exact: "Yes" only
// when some node's path_length reaches the node count.
VertexProgram HamiltonHeuristicProgram(const Graph& g);

// Program names, as stored in VertexProgram::name.
namespace program_names {
inline constexpr char kShortestPath[] = "shortest_path";
inline constexpr char kConnectivity[] = "connectivity";
inline constexpr char kCycleDetection[] = "cycle_detection";
inline constexpr char kBipartite[] = "bipartite";
inline constexpr char kTopologicalSort[] = "topological_sort";
inline constexpr char kTriangleSum[] = "triangle_sum";
inline constexpr char kReachabilityTree[] = "reachability_tree";
inline constexpr char kPageRank[] = "pagerank";
inline constexpr char kHamiltonHeuristic[] = "hamilton_heuristic";
}  // namespace program_names

struct LibraryTemplate {
  std::string name;
  std::string description;
  std::string document;  // six-section text
};

// Every shipped template, rendered for listing and prompt material.
std::vector<LibraryTemplate> AlgorithmLibrary();

}  // namespace nodeagent

#endif  // NODEAGENT_PROGRAMS_H_
