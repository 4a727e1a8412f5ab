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

#ifndef NODEAGENT_ORCHESTRATOR_H_
#define NODEAGENT_ORCHESTRATOR_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nodeagent/answer.h"
#include "nodeagent/backend.h"
#include "nodeagent/chat_transport.h"
#include "nodeagent/engine.h"
#include "nodeagent/graph.h"
#include "nodeagent/max_flow.h"
#include "nodeagent/programs.h"
#include "nodeagent/value.h"

namespace nodeagent {

// A library entry as seen by retrieval: the task it solves, the program
// it instantiates and the weighted phrases that select it.
struct KeywordRule {
  std::string pattern;  // ECMAScript regex, matched case-insensitively
  double weight = 1;
};

struct TaskTemplate {
  Task task;
  std::string program;
  std::string description;
  std::vector<KeywordRule> keywords;
};

const std::vector<TaskTemplate>& TaskTemplates();

struct TemplateScore {
  Task task;
  std::string program;
  double score = 0;
};

struct ClassifierConfig {
  std::size_t top_k = 3;
  // Minimum score for a template to count as suitable.
  double threshold = 2.0;
};

// Templates sorted by descending score, ties by library order; at most k.
std::vector<TemplateScore> RetrieveTemplates(std::string_view text,
                                             const ClassifierConfig& config = {});

// Highest-scoring task. Throws NoMatchingTemplate below the threshold and
// AmbiguousTask when the two best templates tie.
Task ClassifyTask(std::string_view text, const ClassifierConfig& config = {});

struct ProblemSpec {
  Task task = Task::kCycle;
  std::string graph_text;
  bool directed = false;
  bool weighted = false;
  // source, target, sink (NodeRef); top_k (integer).
  FieldMap params;
  std::vector<TemplateScore> retrieved;
};

struct ClassifyOptions {
  ClassifierConfig classifier;
  // Skip retrieval and use this task.
  std::optional<Task> task_hint;
  std::optional<bool> directed;
  std::optional<bool> weighted;
};

// Task, graph format and parameters of a problem statement. Throws
// NoMatchingTemplate, AmbiguousTask, MissingParameter.
ProblemSpec ClassifyProblem(std::string_view text, const ClassifyOptions& options = {});

// Optional chat model acting as the Master for retrieval and for drafting
// a new algorithm when no template fits.
struct MasterOptions {
  std::shared_ptr<ChatTransport> transport;
  std::string model;
  double temperature = 0;
  // Ask the model to pick among the retrieved templates.
  bool llm_classify = false;
  // On NoMatchingTemplate, send the composition prompt instead of failing.
  bool compose_when_unmatched = false;
};

// Prompt asking the Master to choose one of the retrieved templates.
std::string RenderClassifyPrompt(std::string_view text,
                                 const std::vector<TemplateScore>& candidates);
// Reads "Task: <name>" (or a bare template name) from a Master reply.
std::optional<Task> ParseClassifyReply(std::string_view reply);
// Prompt asking the Master to design a six-section algorithm following the
// paradigm, using the retrieved templates as worked examples.
std::string RenderCompositionPrompt(std::string_view text,
                                    const std::vector<TemplateScore>& examples);

struct SolveOptions {
  ClassifyOptions classify;
  PageRankOptions pagerank;
  // Report the exhaustive answer next to heuristic answers when the graph
  // is small enough.
  bool exact_hamilton = true;
  MasterOptions master;
};

struct Solution {
  ProblemSpec spec;
  Answer answer;
  std::size_t supersteps = 0;
  Termination termination = Termination::kConverged;
  RunResult run;
  std::optional<MaxFlowResult> flow;
  // Six-section draft returned by the Master when no template matched.
  std::optional<std::string> composed_algorithm;
};

// classify -> graph -> program -> execute -> summarize. Errors leave with
// the stage they escaped from.
Solution Solve(std::string_view text, AgentBackend& backend,
               const EngineConfig& config = {}, const SolveOptions& options = {});

// Aggregates final states into an answer. Throws InconsistentStates when the
// states cannot come from the task's program, NotADAG for unlayered nodes.
Answer Summarize(const RunResult& result, const ProblemSpec& spec, const Graph& graph,
                 const SolveOptions& options = {});
Answer SummarizeMaxFlow(const MaxFlowResult& result, const ProblemSpec& spec);

// {"id", "task", "value", "narrative", "supersteps", "termination", ...}
std::string SolutionToJson(const Solution& solution, std::string_view id);

}  // namespace nodeagent

#endif  // NODEAGENT_ORCHESTRATOR_H_
