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

#ifndef NODEAGENT_BACKEND_H_
#define NODEAGENT_BACKEND_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nodeagent/vertex_program.h"

namespace nodeagent {

enum class Phase { kInit, kUpdate, kSend };

std::string_view PhaseName(Phase phase);

struct PhaseRequest {
  const VertexProgram& program;
  const NodeContext& ctx;
  Phase phase;
  // Current state; ignored for kInit.
  const VertexState& state;
  // Sorted by sender id; only non-empty for kUpdate.
  std::span<const MessageEnvelope> inbox;
};

struct PhaseResult {
  VertexState state;
  std::vector<MessageEnvelope> messages;
};

// Executes one phase of one agent. Implementations must be safe for
// concurrent calls on distinct node ids within a superstep.
class AgentBackend {
 public:
  virtual ~AgentBackend() = default;

  virtual PhaseResult ExecutePhase(const PhaseRequest& request) = 0;

  // Called before the runtime initializes agents. `run_key` identifies
  // the (graph, program) pair; recording backends key transcripts by it.
  virtual void BeginRun(std::string_view run_key) { (void)run_key; }

  // Upper bound on concurrent ExecutePhase calls the backend accepts.
  virtual std::size_t max_concurrency() const { return 1; }

  virtual std::string_view mode_name() const = 0;
};

// Reference semantics: applies the program's rule functions directly.
class DeterministicBackend final : public AgentBackend {
 public:
  PhaseResult ExecutePhase(const PhaseRequest& request) override;
  std::size_t max_concurrency() const override;
  std::string_view mode_name() const override { return "deterministic"; }
};

}  // namespace nodeagent

#endif  // NODEAGENT_BACKEND_H_
