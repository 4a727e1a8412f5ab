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

#ifndef NODEAGENT_PROMPT_H_
#define NODEAGENT_PROMPT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nodeagent/backend.h"
#include "nodeagent/vertex_program.h"

namespace nodeagent {

struct PhasePrompt {
  std::string system;
  std::string user;
};

// Renders the agent prompt for one phase: the program's six-section
// template as system text, then an "## Input" block with Node Id, Round,
// State, Neighbor Information and Received Messages, and the expected
// "## Output" layout.
PhasePrompt RenderPhasePrompt(const PhaseRequest& request);

// Correction preamble for a retry after an unparseable reply.
std::string RenderRetryPrompt(const PhaseRequest& request,
                              std::string_view previous_reply,
                              std::string_view problem);

// Parses "1. name: value" / "name: value" lines into a map matching
// `schema`. Throws ParseFailure on unknown, missing or ill-typed fields.
FieldMap ParseFieldLines(std::string_view text, const Schema& schema);

// Parses an agent reply. State phases read a "State:" block, Send reads
// "Message sent to Node <id>:" blocks (or "No messages"). The text after
// the last "## Output" heading is used; a fenced JSON block is accepted as a
// fallback. Recipients must be message targets of the node.
// Throws ParseFailure.
PhaseResult ParsePhaseReply(const PhaseRequest& request, std::string_view reply);

// Renders the reply a rule-following agent would give (used for
// hand-authored transcripts and tests).
std::string RenderPhaseReply(const PhaseRequest& request, const PhaseResult& result);

}  // namespace nodeagent

#endif  // NODEAGENT_PROMPT_H_
