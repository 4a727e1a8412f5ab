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

#ifndef NODEAGENT_MAX_FLOW_H_
#define NODEAGENT_MAX_FLOW_H_

#include <cstddef>
#include <vector>

#include "nodeagent/backend.h"
#include "nodeagent/engine.h"
#include "nodeagent/graph.h"

namespace nodeagent {

struct MaxFlowResult {
  double value = 0;
  std::size_t augmentations = 0;
  std::size_t supersteps = 0;      // summed over all reachability phases
  std::vector<NodeId> source_side;  // minimum cut, source side
  double cut_capacity = 0;
  RunResult last_phase;             // final (unsuccessful) search
};

// Master-coordinated Edmonds-Karp: each round runs ReachabilityTreeProgram
// on the residual graph through `backend`, then the master walks the
// parent pointers back from the sink, augments by the bottleneck and
// rebuilds the residual graph. Undirected edges carry capacity both ways.
// Throws NegativeCapacity, SourceEqualsSink, UnknownNode.
MaxFlowResult RunMaxFlow(const Graph& g, NodeId source, NodeId sink,
                         AgentBackend& backend, const EngineConfig& config = {});

}  // namespace nodeagent

#endif  // NODEAGENT_MAX_FLOW_H_
