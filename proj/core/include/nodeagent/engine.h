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

#ifndef NODEAGENT_ENGINE_H_
#define NODEAGENT_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nodeagent/backend.h"
#include "nodeagent/graph.h"
#include "nodeagent/vertex_program.h"

namespace nodeagent {

struct EngineConfig {
  // Superstep cap. Unset: the program's default cap, else node_count + 1.
  std::optional<std::size_t> max_supersteps;
  // When false, agents are visited in a shuffled order (seeded by
  // schedule_seed). Results do not depend on the order.
  bool deterministic_order = true;
  std::uint64_t schedule_seed = 0;
  bool trace_enabled = false;
  // Threads evaluating agents within a phase; capped by the backend.
  std::size_t workers = 1;
  // Absolute tolerance for floating fields in state-change detection.
  double change_tolerance = 1e-12;
};

enum class Termination { kConverged, kTerminationRuleMet, kIterationCapReached };

std::string_view TerminationName(Termination t);

struct StateDiff {
  NodeId node = 0;
  VertexState before;
  VertexState after;
};

struct TraceRound {
  std::size_t superstep = 0;
  std::vector<MessageEnvelope> delivered;
  std::vector<StateDiff> diffs;
  std::optional<NodeId> reseeded;
  std::vector<MessageEnvelope> sent;
  bool changed = false;
};

struct Trace {
  std::vector<std::pair<NodeId, VertexState>> initial_states;
  std::vector<MessageEnvelope> initial_messages;
  std::vector<TraceRound> rounds;
};

struct RunResult {
  std::map<NodeId, VertexState> final_states;
  std::size_t supersteps_executed = 0;
  Termination termination = Termination::kConverged;
  std::size_t messages_sent = 0;
  std::optional<Trace> trace;
};

// Synchronous superstep engine. Initialize() runs Initialization and the
// initial Send; each Superstep() delivers the previous round's messages,
// runs Update on every agent, publishes the new states at the barrier and
// then runs Send. Messages produced in superstep i are only visible in
// superstep i + 1.
class Engine {
 public:
  Engine(const Graph& graph, const VertexProgram& program,
         AgentBackend& backend, EngineConfig config = {});

  void Initialize();
  // Returns whether any agent's state changed (or a node was re-seeded).
  bool Superstep();
  bool TerminationMet() const;

  std::size_t superstep() const { return superstep_; }
  std::size_t max_supersteps() const { return cap_; }
  std::span<const VertexState> states() const { return states_; }
  std::span<const MessageEnvelope> pending() const { return pending_; }
  const FieldMap& globals() const { return globals_; }

  RunResult Result(Termination termination) const;

 private:
  template <typename Fn>
  void ForEachAgent(Fn&& fn);
  void ValidateState(NodeId node, const VertexState& state) const;
  void ValidateMessages(NodeId node, const std::vector<MessageEnvelope>& out) const;
  void SendAll();
  PhaseResult Execute(std::size_t index, Phase phase, const VertexState& state,
                      std::span<const MessageEnvelope> inbox);

  const Graph& graph_;
  const VertexProgram& program_;
  AgentBackend& backend_;
  EngineConfig config_;
  std::size_t cap_ = 1;

  std::vector<std::size_t> order_;
  std::vector<VertexState> states_;
  std::vector<MessageEnvelope> pending_;
  FieldMap globals_;
  std::size_t superstep_ = 0;
  std::size_t messages_sent_ = 0;
  bool initialized_ = false;
  std::optional<Trace> trace_;
};

RunResult Run(const Graph& graph, const VertexProgram& program,
              AgentBackend& backend, const EngineConfig& config = {});

// Stable key for a (graph, program) pair, used to address transcripts.
std::string ProblemKey(const Graph& graph, const VertexProgram& program);

// "1. distance: 7 2. visited: True"
std::string RenderStateInline(const FieldMap& fields);

// Round log in the style "Node 1 Send Message to Node 0: 1. new_distance: 7".
std::string RenderTrace(const RunResult& result);

}  // namespace nodeagent

#endif  // NODEAGENT_ENGINE_H_
