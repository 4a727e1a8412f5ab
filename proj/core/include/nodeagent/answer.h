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

#ifndef NODEAGENT_ANSWER_H_
#define NODEAGENT_ANSWER_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nodeagent/graph.h"

namespace nodeagent {

enum class Task {
  kCycle,
  kConnectivity,
  kBipartite,
  kTopoSort,
  kShortestPath,
  kTriangleSum,
  kMaxFlow,
  kPageRank,
  kHamiltonHeuristic,
};

inline constexpr Task kAllTasks[] = {
    Task::kCycle,        Task::kConnectivity, Task::kBipartite,
    Task::kTopoSort,     Task::kShortestPath, Task::kTriangleSum,
    Task::kMaxFlow,      Task::kPageRank,     Task::kHamiltonHeuristic};

std::string_view TaskName(Task task);
// Accepts the names returned by TaskName plus a few aliases ("topo",
// "toposort", "flow", "hamilton", "sp").
std::optional<Task> ParseTaskName(std::string_view name);

enum class AnswerKind { kBoolean, kNumber, kOrdering, kDistanceMap, kRanking, kNoSolution };

std::string_view AnswerKindName(AnswerKind kind);

// nullopt distance = unreachable.
using DistanceMap = std::vector<std::pair<NodeId, std::optional<double>>>;
using Ranking = std::vector<std::pair<NodeId, double>>;
using AnswerValue = std::variant<std::monostate, bool, double, std::vector<NodeId>,
                                 DistanceMap, Ranking>;

struct Answer {
  AnswerKind kind = AnswerKind::kNoSolution;
  AnswerValue value;
  std::string narrative;
  // Set for heuristic programs; `exact` carries the exhaustive answer when
  // it was computed.
  bool heuristic = false;
  std::optional<bool> exact;
};

// Recovers the structured value from an answer narrative.
// Throws ParseFailure when the narrative does not carry a value of `kind`.
AnswerValue ParseAnswerNarrative(AnswerKind kind, std::string_view narrative);

// Compact single-field rendering (no commas), used in CSV reports.
std::string CompactValue(const AnswerValue& value);

// JSON rendering of an answer value.
std::string ValueToJson(const AnswerValue& value);

// Shortest round-trip decimal form.
std::string FormatReal(double value);

// Narrative builders shared by the summarizer and the oracles.
std::string BooleanNarrative(Task task, bool value);
std::string NumberNarrative(Task task, double value, std::string_view context);
std::string OrderingNarrative(const std::vector<NodeId>& order);
std::string DistanceNarrative(NodeId source, const DistanceMap& distances,
                              std::optional<NodeId> target);
std::string RankingNarrative(const Ranking& ranking, std::optional<std::size_t> top_k);

}  // namespace nodeagent

#endif  // NODEAGENT_ANSWER_H_
