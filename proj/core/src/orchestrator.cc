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

#include "nodeagent/orchestrator.h"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "nodeagent/errors.h"
#include "nodeagent/oracles.h"

namespace nodeagent {
namespace {

constexpr std::size_t kExactHamiltonLimit = 20;

template <typename Fn>
auto Staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.WithStage(stage);
  }
}

std::optional<NodeId> FirstNode(const std::string& text,
                                std::initializer_list<const char*> patterns,
                                int group = 1) {
  for (const char* p : patterns) {
    std::regex re(p, std::regex::icase);
    std::smatch m;
    if (std::regex_search(text, m, re)) return std::stoll(m[group].str());
  }
  return std::nullopt;
}

std::optional<std::pair<NodeId, NodeId>> FirstPair(
    const std::string& text, std::initializer_list<const char*> patterns) {
  for (const char* p : patterns) {
    std::regex re(p, std::regex::icase);
    std::smatch m;
    if (std::regex_search(text, m, re)) {
      return std::make_pair(std::stoll(m[1].str()), std::stoll(m[2].str()));
    }
  }
  return std::nullopt;
}

[[noreturn]] void Missing(Task task, const char* what) {
  throw Error(ErrorCode::kMissingParameter,
              std::string(TaskName(task)) + " needs " + what);
}

void ExtractParams(Task task, const std::string& text, FieldMap& params) {
  switch (task) {
    case Task::kShortestPath: {
      auto pair = FirstPair(text, {R"(\bfrom node (-?\d+) to node (-?\d+))"});
      if (pair) {
        params.set("source", NodeRef{pair->first});
        params.set("target", NodeRef{pair->second});
        return;
      }
      auto source = FirstNode(text, {R"(\bfrom node (-?\d+))",
                                     R"(\bsource node (?:is )?(-?\d+))"});
      if (!source) Missing(task, "a source node (\"from node X\")");
      params.set("source", NodeRef{*source});
      if (auto target = FirstNode(text, {R"(\bto node (-?\d+))"})) {
        params.set("target", NodeRef{*target});
      }
      return;
    }
    case Task::kConnectivity: {
      auto pair = FirstPair(text, {R"(\bbetween node (-?\d+) and node (-?\d+))",
                                   R"(\bnodes (-?\d+) and (-?\d+))",
                                   R"(\bnode (-?\d+) to node (-?\d+))",
                                   R"(\bnode (-?\d+) and node (-?\d+))"});
      if (!pair) Missing(task, "a node pair (\"between node X and node Y\")");
      params.set("source", NodeRef{pair->first});
      params.set("target", NodeRef{pair->second});
      return;
    }
    case Task::kMaxFlow: {
      auto pair = FirstPair(text, {R"(\bfrom node (-?\d+) to node (-?\d+))"});
      if (!pair) {
        auto s = FirstNode(text, {R"(\bsource (?:node )?(?:is )?(-?\d+))"});
        auto t = FirstNode(text, {R"(\bsink (?:node )?(?:is )?(-?\d+))"});
        if (s && t) pair = std::make_pair(*s, *t);
      }
      if (!pair) Missing(task, "a source and a sink (\"from node X to node Y\")");
      params.set("source", NodeRef{pair->first});
      params.set("sink", NodeRef{pair->second});
      return;
    }
    case Task::kPageRank: {
      static const std::regex kTop(
          R"(\btop[- ]?(\d+)\b|\b(\d+) most important\b|\bwhich (\d+) \w+ (?:are|is) (?:the )?most important)",
          std::regex::icase);
      std::smatch m;
      if (std::regex_search(text, m, kTop)) {
        for (int i = 1; i <= 3; ++i) {
          if (m[i].matched) {
            params.set("top_k", static_cast<std::int64_t>(std::stoll(m[i].str())));
            break;
          }
        }
      }
      return;
    }
    default:
      return;
  }
}

NodeId ParamNode(const FieldMap& params, std::string_view name) {
  return params.get<NodeRef>(name).id;
}

}  // namespace

const std::vector<TaskTemplate>& TaskTemplates() {
  static const std::vector<TaskTemplate> kTemplates = {
      {Task::kCycle, program_names::kCycleDetection,
       "Detect whether a graph contains any cycle by repeatedly pruning leaves.",
       {{R"(\bcycles?\b)", 2},
        {R"(contains? any cycles?)", 1},
        {R"(is there a cycle|there is a cycle)", 1}}},
      {Task::kConnectivity, program_names::kConnectivity,
       "Decide whether two nodes are connected via a path by flooding from one of them.",
       {{R"(connected via a path)", 3},
        {R"(is there a path between)", 3},
        {R"(whether (?:the )?two nodes are connected)", 3},
        {R"(\bconnectivity\b)", 2},
        {R"(\breachable\b)", 2}}},
      {Task::kBipartite, program_names::kBipartite,
       "Check whether a graph is bipartite by two-coloring it through message passing.",
       {{R"(bipartite)", 4}}},
      {Task::kTopoSort, program_names::kTopologicalSort,
       "Find a topological ordering of the vertices of a directed acyclic graph.",
       {{R"(topolog)", 4}}},
      {Task::kShortestPath, program_names::kShortestPath,
       "Compute shortest distances from a source node with distributed Bellman-Ford.",
       {{R"(shortest)", 4}, {R"(shortest path)", 1}, {R"(\bdistances?\b)", 1}}},
      {Task::kTriangleSum, program_names::kTriangleSum,
       "Find the maximum sum of node weights over connected triplets (triangles).",
       {{R"(triangle)", 3},
        {R"(triplet)", 3},
        {R"(three interconnected nodes)", 3},
        {R"(maximum sum of (?:the )?weights)", 2}}},
      {Task::kMaxFlow, program_names::kReachabilityTree,
       "Calculate the maximum flow from a source to a sink with augmenting paths.",
       {{R"(maximum flow|max flow)", 4}, {R"(\bflow\b)", 1}}},
      {Task::kPageRank, program_names::kPageRank,
       "Rank nodes by importance with PageRank power iteration.",
       {{R"(pagerank|page rank)", 4},
        {R"(\bimportance\b)", 3},
        {R"(\bimportant\b)", 2},
        {R"(\brank)", 1}}},
      {Task::kHamiltonHeuristic, program_names::kHamiltonHeuristic,
       "Heuristically search for a Hamiltonian path that visits each node exactly once.",
       {{R"(hamilton)", 4},
        {R"(visits each (?:vertex|node) exactly once)", 3}}},
  };
  return kTemplates;
}

std::vector<TemplateScore> RetrieveTemplates(std::string_view text,
                                             const ClassifierConfig& config) {
  const std::string s(text);
  std::vector<TemplateScore> scores;
  for (const TaskTemplate& t : TaskTemplates()) {
    double score = 0;
    for (const KeywordRule& rule : t.keywords) {
      std::regex re(rule.pattern, std::regex::icase);
      if (std::regex_search(s, re)) score += rule.weight;
    }
    scores.push_back({t.task, t.program, score});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const auto& a, const auto& b) { return a.score > b.score; });
  if (scores.size() > config.top_k) scores.resize(config.top_k);
  return scores;
}

Task ClassifyTask(std::string_view text, const ClassifierConfig& config) {
  ClassifierConfig wide = config;
  wide.top_k = std::max<std::size_t>(config.top_k, 2);
  auto scores = RetrieveTemplates(text, wide);
  if (scores.empty() || scores.front().score < config.threshold) {
    throw Error(ErrorCode::kNoMatchingTemplate,
                "no library template scores at least " + FormatReal(config.threshold));
  }
  if (scores.size() > 1 && scores[1].score == scores[0].score) {
    throw Error(ErrorCode::kAmbiguousTask,
                std::string(TaskName(scores[0].task)) + " and " +
                    std::string(TaskName(scores[1].task)) + " tie at " +
                    FormatReal(scores[0].score));
  }
  return scores.front().task;
}

ProblemSpec ClassifyProblem(std::string_view text, const ClassifyOptions& options) {
  ProblemSpec spec;
  spec.graph_text = std::string(text);
  spec.retrieved = RetrieveTemplates(text, options.classifier);
  spec.task = options.task_hint ? *options.task_hint
                                : ClassifyTask(text, options.classifier);
  GraphFormat format = InferGraphFormat(text);
  spec.directed = options.directed.value_or(format.directed);
  spec.weighted = options.weighted.value_or(format.weighted);
  ExtractParams(spec.task, spec.graph_text, spec.params);
  return spec;
}

std::string RenderClassifyPrompt(std::string_view text,
                                 const std::vector<TemplateScore>& candidates) {
  std::ostringstream out;
  out << "You are the Master of a network of node agents. Choose the algorithm "
         "template from the distributed algorithm library that solves the problem "
         "below.\n\n## Candidate templates\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& t = *std::find_if(TaskTemplates().begin(), TaskTemplates().end(),
                                  [&](const auto& x) { return x.task == candidates[i].task; });
    out << i + 1 << ". " << TaskName(t.task) << ": " << t.description << "\n";
  }
  out << "\n## Problem\n" << text << "\n\n## Output\nReply with a single line of the form "
      << "\"Task: <template name>\".\n";
  return out.str();
}

std::optional<Task> ParseClassifyReply(std::string_view reply) {
  static const std::regex kLine(R"(task\s*:\s*`?([A-Za-z_\- ]+?)`?\s*(?:$|\n|\.))",
                                std::regex::icase);
  std::string text(reply);
  std::smatch m;
  if (std::regex_search(text, m, kLine)) {
    if (auto t = ParseTaskName(m[1].str())) return t;
  }
  std::string trimmed = text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n`"));
  trimmed.erase(trimmed.find_last_not_of(" \t\r\n`.") + 1);
  return ParseTaskName(trimmed);
}

std::string RenderCompositionPrompt(std::string_view text,
                                    const std::vector<TemplateScore>& examples) {
  std::ostringstream out;
  out << "You are the Master of a network of node agents. Every node of the graph is "
         "an agent that keeps a State, exchanges Messages with its neighbors and runs "
         "in synchronized rounds: Initialization and an initial Send, then rounds of "
         "Update (from the messages received) followed by Send. The run stops when "
         "the Termination condition holds or no agent's state changes.\n\n"
         "No template in the distributed algorithm library fits the problem below. "
         "Design a distributed algorithm following this paradigm, based on the "
         "examples.\n";
  const auto library = AlgorithmLibrary();
  std::size_t shown = 0;
  for (const auto& ex : examples) {
    auto it = std::find_if(library.begin(), library.end(),
                           [&](const auto& l) { return l.name == ex.program; });
    if (it == library.end()) continue;
    out << "\n## Example " << ++shown << ": " << it->name << "\n" << it->document << "\n";
  }
  out << "\n## Problem\n" << text
      << "\n\n## Output\nWrite the algorithm in six sections: ### State, ### Message, "
         "### Initialization, ### Send, ### Update, ### Termination.\n";
  return out.str();
}

Answer Summarize(const RunResult& result, const ProblemSpec& spec, const Graph& graph,
                 const SolveOptions& options) {
  const auto& states = result.final_states;
  if (states.size() != graph.node_count()) {
    throw Error(ErrorCode::kInconsistentStates,
                "expected " + std::to_string(graph.node_count()) + " final states, got " +
                    std::to_string(states.size()));
  }
  auto state_of = [&](NodeId v) -> const VertexState& {
    auto it = states.find(v);
    if (it == states.end()) {
      throw Error(ErrorCode::kInconsistentStates, "no final state for node " + std::to_string(v));
    }
    return it->second;
  };
  Answer answer;
  try {
    switch (spec.task) {
      case Task::kCycle: {
        bool cycle = std::any_of(states.begin(), states.end(),
                                 [](const auto& s) { return s.second.template get<bool>("active"); });
        answer.kind = AnswerKind::kBoolean;
        answer.value = cycle;
        answer.narrative = BooleanNarrative(spec.task, cycle);
        break;
      }
      case Task::kConnectivity: {
        NodeId target = ParamNode(spec.params, "target");
        bool reached = state_of(target).get<bool>("reached");
        answer.kind = AnswerKind::kBoolean;
        answer.value = reached;
        answer.narrative = BooleanNarrative(spec.task, reached);
        break;
      }
      case Task::kBipartite: {
        bool conflict = false;
        for (const auto& [node, s] : states) {
          if (s.is_unset("color")) {
            throw Error(ErrorCode::kInconsistentStates,
                        "node " + std::to_string(node) + " was never colored");
          }
          conflict = conflict || s.get<bool>("conflict");
        }
        answer.kind = AnswerKind::kBoolean;
        answer.value = !conflict;
        answer.narrative = BooleanNarrative(spec.task, !conflict);
        break;
      }
      case Task::kTopoSort: {
        std::vector<std::pair<std::int64_t, NodeId>> layered;
        std::vector<NodeId> stuck;
        for (const auto& [node, s] : states) {
          if (s.is_unset("layer")) {
            stuck.push_back(node);
          } else {
            layered.emplace_back(s.get<std::int64_t>("layer"), node);
          }
        }
        if (!stuck.empty()) {
          std::string list;
          for (std::size_t i = 0; i < stuck.size() && i < 10; ++i) {
            list += (i ? ", " : "") + std::to_string(stuck[i]);
          }
          throw Error(ErrorCode::kNotADag,
                      std::to_string(stuck.size()) + " node(s) never reached in-degree 0 (" +
                          list + (stuck.size() > 10 ? ", ..." : "") + ")");
        }
        std::sort(layered.begin(), layered.end());
        std::vector<NodeId> order;
        for (const auto& [layer, node] : layered) order.push_back(node);
        answer.kind = AnswerKind::kOrdering;
        answer.narrative = OrderingNarrative(order);
        answer.value = std::move(order);
        break;
      }
      case Task::kShortestPath: {
        DistanceMap distances;
        for (NodeId v : graph.node_ids()) {
          const Value& d = state_of(v).at("distance");
          distances.emplace_back(v, std::holds_alternative<Infinity>(d)
                                        ? std::nullopt
                                        : AsNumber(d));
        }
        std::optional<NodeId> target;
        if (spec.params.has("target")) target = ParamNode(spec.params, "target");
        answer.kind = AnswerKind::kDistanceMap;
        answer.narrative =
            DistanceNarrative(ParamNode(spec.params, "source"), distances, target);
        answer.value = std::move(distances);
        break;
      }
      case Task::kTriangleSum: {
        std::optional<double> best;
        for (const auto& [node, s] : states) {
          if (s.is_unset("best_sum")) continue;
          double v = *AsNumber(s.at("best_sum"));
          if (!best || v > *best) best = v;
        }
        if (best) {
          answer.kind = AnswerKind::kNumber;
          answer.value = *best;
          answer.narrative = NumberNarrative(spec.task, *best, "");
        } else {
          answer.kind = AnswerKind::kNoSolution;
          answer.narrative = "There is no triangle in this graph.";
        }
        break;
      }
      case Task::kPageRank: {
        Ranking ranking;
        for (const auto& [node, s] : states) ranking.emplace_back(node, s.get<double>("rank"));
        std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
          return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        std::optional<std::size_t> top_k;
        if (spec.params.has("top_k")) {
          top_k = static_cast<std::size_t>(spec.params.get<std::int64_t>("top_k"));
        }
        answer.kind = AnswerKind::kRanking;
        answer.narrative = RankingNarrative(ranking, top_k);
        answer.value = std::move(ranking);
        break;
      }
      case Task::kHamiltonHeuristic: {
        std::int64_t longest = 0;
        for (const auto& [node, s] : states) {
          longest = std::max(longest, s.get<std::int64_t>("path_length"));
        }
        const auto n = static_cast<std::int64_t>(graph.node_count());
        bool found = longest >= n;
        answer.kind = AnswerKind::kBoolean;
        answer.value = found;
        answer.heuristic = true;
        answer.narrative = BooleanNarrative(spec.task, found) +
                           " (Heuristic answer: the maximum path length found is " +
                           std::to_string(longest) + " for " + std::to_string(n) + " nodes.";
        if (options.exact_hamilton && graph.node_count() <= kExactHamiltonLimit) {
          answer.exact = OracleHamiltonPath(graph);
          answer.narrative += std::string(" Exhaustive search: a Hamiltonian path ") +
                              (*answer.exact ? "exists" : "does not exist") + ".";
        }
        answer.narrative += ")";
        break;
      }
      case Task::kMaxFlow:
        throw Error(ErrorCode::kInconsistentStates,
                    "max flow answers come from SummarizeMaxFlow");
    }
  } catch (const std::bad_variant_access&) {
    throw Error(ErrorCode::kInconsistentStates,
                "final states do not match the " + std::string(TaskName(spec.task)) +
                    " program");
  }
  return answer;
}

Answer SummarizeMaxFlow(const MaxFlowResult& result, const ProblemSpec& spec) {
  Answer answer;
  answer.kind = AnswerKind::kNumber;
  answer.value = result.value;
  answer.narrative = NumberNarrative(
      Task::kMaxFlow, result.value,
      "from node " + std::to_string(ParamNode(spec.params, "source")) + " to node " +
          std::to_string(ParamNode(spec.params, "sink")));
  return answer;
}

Solution Solve(std::string_view text, AgentBackend& backend, const EngineConfig& config,
               const SolveOptions& options) {
  Solution solution;
  const MasterOptions& master = options.master;
  try {
    solution.spec = Staged("classify", [&] {
      ClassifyOptions classify = options.classify;
      if (!classify.task_hint && master.llm_classify && master.transport) {
        auto candidates = RetrieveTemplates(text, classify.classifier);
        ChatRequest request{master.model, master.temperature,
                            {{"user", RenderClassifyPrompt(text, candidates)}}};
        auto picked = ParseClassifyReply(master.transport->Complete(request));
        bool known = picked && std::any_of(candidates.begin(), candidates.end(),
                                           [&](const auto& c) { return c.task == *picked; });
        if (known) classify.task_hint = picked;
      }
      return ClassifyProblem(text, classify);
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoMatchingTemplate || !master.compose_when_unmatched ||
        !master.transport) {
      throw;
    }
    return Staged("compose", [&] {
      ClassifierConfig any = options.classify.classifier;
      auto examples = RetrieveTemplates(text, any);
      ChatRequest request{master.model, master.temperature,
                          {{"user", RenderCompositionPrompt(text, examples)}}};
      std::string draft = master.transport->Complete(request);
      if (!ParseTemplateSections(draft).complete()) {
        throw Error(ErrorCode::kParseFailure,
                    "the drafted algorithm is missing one of the six sections");
      }
      Solution composed;
      composed.spec.graph_text = std::string(text);
      composed.spec.retrieved = examples;
      composed.answer.kind = AnswerKind::kNoSolution;
      composed.answer.narrative =
          "No library template fits this problem; a new distributed algorithm was drafted.";
      composed.composed_algorithm = std::move(draft);
      return composed;
    });
  }
  const ProblemSpec& spec = solution.spec;

  Graph graph = Staged("graph", [&] {
    Graph g = ParseGraph(spec.graph_text, spec.directed, spec.weighted);
    for (const char* name : {"source", "target", "sink"}) {
      if (spec.params.has(name) && !g.contains(ParamNode(spec.params, name))) {
        throw Error(ErrorCode::kUnknownNode,
                    std::string(name) + " node " +
                        std::to_string(ParamNode(spec.params, name)) + " is not in the graph");
      }
    }
    if (spec.task == Task::kBipartite || spec.task == Task::kHamiltonHeuristic) {
      return g.directed() ? AsUndirected(g) : g;
    }
    return g;
  });

  if (spec.task == Task::kMaxFlow) {
    MaxFlowResult flow = Staged("execute", [&] {
      return RunMaxFlow(graph, ParamNode(spec.params, "source"),
                        ParamNode(spec.params, "sink"), backend, config);
    });
    solution.answer = Staged("summarize", [&] { return SummarizeMaxFlow(flow, spec); });
    solution.supersteps = flow.supersteps;
    solution.termination = flow.last_phase.termination;
    solution.run = flow.last_phase;
    solution.flow = std::move(flow);
    return solution;
  }

  VertexProgram program = Staged("program", [&] {
    switch (spec.task) {
      case Task::kCycle: return CycleDetectionProgram(graph);
      case Task::kConnectivity:
        return ConnectivityProgram(graph, ParamNode(spec.params, "source"),
                                   ParamNode(spec.params, "target"));
      case Task::kBipartite: return BipartiteProgram(graph);
      case Task::kTopoSort: return TopologicalSortProgram(graph);
      case Task::kShortestPath:
        return ShortestPathProgram(graph, ParamNode(spec.params, "source"));
      case Task::kTriangleSum: return TriangleSumProgram(graph);
      case Task::kPageRank: return PageRankProgram(graph, options.pagerank);
      case Task::kHamiltonHeuristic: return HamiltonHeuristicProgram(graph);
      case Task::kMaxFlow: break;
    }
    throw Error(ErrorCode::kInvalidArgument, "no program for task");
  });

  solution.run = Staged("execute", [&] { return Run(graph, program, backend, config); });
  solution.supersteps = solution.run.supersteps_executed;
  solution.termination = solution.run.termination;
  solution.answer = Staged("summarize", [&] {
    return Summarize(solution.run, spec, graph, options);
  });
  return solution;
}

std::string SolutionToJson(const Solution& solution, std::string_view id) {
  nlohmann::ordered_json out;
  out["id"] = std::string(id);
  out["task"] = solution.composed_algorithm ? "composed"
                                            : std::string(TaskName(solution.spec.task));
  out["kind"] = std::string(AnswerKindName(solution.answer.kind));
  out["value"] = nlohmann::json::parse(ValueToJson(solution.answer.value));
  out["narrative"] = solution.answer.narrative;
  out["supersteps"] = solution.supersteps;
  out["termination"] = std::string(TerminationName(solution.termination));
  out["heuristic"] = solution.answer.heuristic;
  out["exact"] = solution.answer.exact ? nlohmann::json(*solution.answer.exact)
                                       : nlohmann::json(nullptr);
  if (solution.composed_algorithm) out["composed_algorithm"] = *solution.composed_algorithm;
  return out.dump();
}

}  // namespace nodeagent
