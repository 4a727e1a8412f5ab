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

#ifndef NODEAGENT_VERTEX_PROGRAM_H_
#define NODEAGENT_VERTEX_PROGRAM_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nodeagent/graph.h"
#include "nodeagent/value.h"

namespace nodeagent {

struct MessageEnvelope {
  NodeId sender = 0;
  NodeId recipient = 0;
  FieldMap payload;

  friend bool operator==(const MessageEnvelope&, const MessageEnvelope&) = default;
};

// What a rule sees about the agent it runs on. `superstep` is 0 during
// Initialization and the initial Send, and i during superstep i.
struct NodeContext {
  const Graph& graph;
  NodeId id;
  std::size_t superstep;
  const FieldMap& params;
  // Program aggregates computed at the previous barrier.
  const FieldMap& globals;

  // Agents message along out-edges (all incident edges when undirected).
  std::span<const Neighbor> targets() const { return graph.neighbors(id); }
};

// Human-readable six-section template, used as library entries and as the
// instruction block of agent prompts.
struct TemplateDocument {
  std::string title;
  std::string summary;
  std::vector<std::string> state_docs;    // one per state field
  std::vector<std::string> message_docs;  // one per message field
  std::vector<std::string> initialization;
  std::vector<std::string> send;
  std::vector<std::string> update;
  std::vector<std::string> termination;
};

// A vertex program: State and Message schemas plus the Initialization,
// Send, Update and Termination rules. Rules must be pure functions of their
// arguments; the runtime may evaluate agents in any order or concurrently.
struct VertexProgram {
  using InitRule = std::function<VertexState(const NodeContext&)>;
  using SendRule = std::function<std::vector<MessageEnvelope>(
      const NodeContext&, const VertexState&)>;
  using UpdateRule = std::function<VertexState(
      const NodeContext&, const VertexState&, std::span<const MessageEnvelope>)>;
  // Global predicate over all states, indexed like graph.node_ids().
  using TerminationRule = std::function<bool(
      const Graph&, std::span<const VertexState>, std::size_t superstep)>;
  using AggregateRule =
      std::function<FieldMap(const Graph&, std::span<const VertexState>)>;
  using SeedSelector = std::function<std::optional<NodeId>(
      const Graph&, std::span<const VertexState>)>;
  using SeedRule =
      std::function<VertexState(const NodeContext&, const VertexState&)>;

  std::string name;
  Schema state_schema;
  Schema message_schema;
  FieldMap params;

  InitRule init;
  SendRule send;
  UpdateRule update;
  TerminationRule terminate;  // optional; quiescence always terminates

  // Optional global values (e.g. dangling PageRank mass) computed from the
  // states that produced the in-flight messages.
  AggregateRule aggregate;

  // Optional master intervention on quiescence: pick one node and re-seed
  // it, e.g. to start coloring the next connected component.
  SeedSelector select_seed;
  SeedRule seed;

  // Output is a heuristic, not an exact answer.
  bool heuristic = false;
  // Default superstep cap for this program on a graph with n nodes;
  // zero means "use the engine default".
  std::function<std::size_t(std::size_t)> default_cap;

  TemplateDocument doc;
};

// Renders the six labelled sections ("### State", "### Message",
// "### Initialization", "### Send", "### Update", "### Termination").
std::string RenderTemplate(const TemplateDocument& doc, const Schema& state,
                           const Schema& message);
std::string RenderTemplate(const VertexProgram& program);

// Splits a six-section template document into its sections. Missing
// sections are returned empty.
struct TemplateSections {
  std::string state, message, initialization, send, update, termination;
  bool complete() const;
};
TemplateSections ParseTemplateSections(std::string_view text);

}  // namespace nodeagent

#endif  // NODEAGENT_VERTEX_PROGRAM_H_
