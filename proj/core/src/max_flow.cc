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

#include "nodeagent/max_flow.h"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "nodeagent/errors.h"
#include "nodeagent/programs.h"

namespace nodeagent {

namespace {

using Arc = std::pair<NodeId, NodeId>;

Graph ResidualGraph(const Graph& g, const std::map<Arc, double>& residual) {
  std::vector<NodeId> ids(g.node_ids().begin(), g.node_ids().end());
  std::vector<Edge> edges;
  for (const auto& [arc, capacity] : residual) {
    if (capacity > 0) edges.push_back({arc.first, arc.second, capacity, std::nullopt});
  }
  return Graph(std::move(ids), std::move(edges), /*directed=*/true,
               /*weighted=*/true);
}

}  // namespace

MaxFlowResult RunMaxFlow(const Graph& g, NodeId source, NodeId sink,
                         AgentBackend& backend, const EngineConfig& config) {
  if (!g.contains(source)) {
    throw Error(ErrorCode::kUnknownNode, "source node " + std::to_string(source));
  }
  if (!g.contains(sink)) {
    throw Error(ErrorCode::kUnknownNode, "sink node " + std::to_string(sink));
  }
  if (source == sink) {
    throw Error(ErrorCode::kSourceEqualsSink, "node " + std::to_string(source));
  }
  std::map<Arc, double> residual;
  for (const auto& e : g.edges()) {
    double capacity = e.weight.value_or(1.0);
    if (capacity < 0) {
      throw Error(ErrorCode::kNegativeCapacity,
                  "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                      ") has capacity " + FormatNumber(capacity));
    }
    if (e.src == e.dst) continue;
    residual[{e.src, e.dst}] += capacity;
    if (!g.directed()) residual[{e.dst, e.src}] += capacity;
  }

  MaxFlowResult result;
  for (;;) {
    Graph graph = ResidualGraph(g, residual);
    VertexProgram search = ReachabilityTreeProgram(graph, source, sink);
    RunResult run = Run(graph, search, backend, config);
    result.supersteps += run.supersteps_executed;
    if (!run.final_states.at(sink).get<bool>("reached")) {
      result.last_phase = std::move(run);
      break;
    }

    std::vector<Arc> path;
    for (NodeId v = sink; v != source;) {
      const VertexState& s = run.final_states.at(v);
      if (s.is_unset("parent")) {
        throw Error(ErrorCode::kInconsistentStates,
                    "reached node " + std::to_string(v) + " has no parent");
      }
      NodeId u = s.get<NodeRef>("parent").id;
      path.emplace_back(u, v);
      v = u;
      if (path.size() > g.node_count()) {
        throw Error(ErrorCode::kInconsistentStates, "parent pointers form a loop");
      }
    }
    double bottleneck = std::numeric_limits<double>::infinity();
    for (const auto& arc : path) {
      auto it = residual.find(arc);
      if (it == residual.end() || it->second <= 0) {
        throw Error(ErrorCode::kInconsistentStates,
                    "parent pointer does not follow a residual arc");
      }
      bottleneck = std::min(bottleneck, it->second);
    }
    for (const auto& [u, v] : path) {
      residual[{u, v}] -= bottleneck;
      residual[{v, u}] += bottleneck;
    }
    result.value += bottleneck;
    ++result.augmentations;
  }

  for (const auto& [node, state] : result.last_phase.final_states) {
    if (state.get<bool>("reached")) result.source_side.push_back(node);
  }
  std::vector<bool> on_source_side(g.node_count(), false);
  for (NodeId v : result.source_side) on_source_side[g.index_of(v)] = true;
  for (const auto& e : g.edges()) {
    double capacity = e.weight.value_or(1.0);
    bool src_in = on_source_side[g.index_of(e.src)];
    bool dst_in = on_source_side[g.index_of(e.dst)];
    if (src_in && !dst_in) result.cut_capacity += capacity;
    if (!g.directed() && dst_in && !src_in) result.cut_capacity += capacity;
  }
  return result;
}

}  // namespace nodeagent
