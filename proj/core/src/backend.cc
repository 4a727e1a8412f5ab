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

#include "nodeagent/backend.h"

#include <limits>

namespace nodeagent {

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kInit: return "init";
    case Phase::kUpdate: return "update";
    case Phase::kSend: return "send";
  }
  return "unknown";
}

PhaseResult DeterministicBackend::ExecutePhase(const PhaseRequest& request) {
  const VertexProgram& program = request.program;
  switch (request.phase) {
    case Phase::kInit:
      return {program.init(request.ctx), {}};
    case Phase::kUpdate:
      return {program.update(request.ctx, request.state, request.inbox), {}};
    case Phase::kSend:
      return {request.state, program.send(request.ctx, request.state)};
  }
  return {request.state, {}};
}

std::size_t DeterministicBackend::max_concurrency() const {
  return std::numeric_limits<std::size_t>::max();
}

}  // namespace nodeagent
