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

#include "nodeagent/programs.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "nodeagent/errors.h"

namespace nodeagent {

namespace {

FieldSpec Bool(std::string name) {
  return {std::move(name), ValueKind::kBoolean, false, false};
}
FieldSpec Int(std::string name, bool nullable = false) {
  return {std::move(name), ValueKind::kInteger, nullable, false};
}
FieldSpec Num(std::string name, bool nullable = false, bool infinite = false) {
  return {std::move(name), ValueKind::kNumber, nullable, infinite};
}
FieldSpec Node(std::string name, bool nullable = false) {
  return {std::move(name), ValueKind::kNode, nullable, false};
}

void RequireNode(const Graph& g, NodeId v, const char* role) {
  if (!g.contains(v)) {
    throw Error(ErrorCode::kUnknownNode,
                std::string(role) + " node " + std::to_string(v) +
                    " is not in the graph");
  }
}

NodeId ParamNode(const NodeContext& ctx, const char* name) {
  return ctx.params.get<NodeRef>(name).id;
}

std::int64_t AsInt(std::size_t v) { return static_cast<std::int64_t>(v); }

std::vector<MessageEnvelope> Broadcast(const NodeContext& ctx,
                                       const FieldMap& payload,
                                       bool include_self = true) {
  std::vector<MessageEnvelope> out;
  for (const auto& n : ctx.targets()) {
    if (!include_self && n.id == ctx.id) continue;
    out.push_back({ctx.id, n.id, payload});
  }
  return out;
}

TemplateDocument ShortestPathDoc() {
  TemplateDocument d;
  d.title = "Shortest Path";
  d.summary =
      "Computes the shortest distance from a source node to every other node "
      "of a graph with non-negative edge weights.";
  d.state_docs = {
      "Number, the shortest distance from the source found so far "
      "(\\infinity when no path is known)."};
  d.message_docs = {
      "Number, the distance the receiver would have through the sender: the "
      "sender's distance plus the weight of the connecting edge."};
  d.initialization = {
      "If the node is the source node, set `distance = 0`.",
      "Otherwise set `distance = \\infinity`."};
  d.send = {
      "For each neighbor, compute `new_distance = distance + weight of the "
      "edge to that neighbor` (\\infinity stays \\infinity).",
      "Send a message carrying `new_distance` to that neighbor."};
  d.update = {
      "Take the smallest `new_distance` among the received messages.",
      "If it is smaller than the current `distance`, set `distance` to it; "
      "otherwise keep the current `distance`."};
  d.termination = {
      "No node changes its `distance` during a full round (all states "
      "unchanged)."};
  return d;
}

TemplateDocument ConnectivityDoc() {
  TemplateDocument d;
  d.title = "Connectivity";
  d.summary =
      "Decides whether a target node can be reached from a source node by "
      "flooding a reached flag outward from the source.";
  d.state_docs = {"Boolean, whether a path from the source to this node is known."};
  d.message_docs = {"Boolean, always True: the sender has been reached."};
  d.initialization = {"Set `reached = True` for the source node.",
                      "Set `reached = False` for every other node."};
  d.send = {"If `reached` is True, send `reached: True` to every neighbor.",
            "If `reached` is False, send nothing."};
  d.update = {"If at least one message was received, set `reached = True`.",
              "Otherwise keep the current value."};
  d.termination = {
      "No node changes its state during a full round. The two nodes are "
      "connected exactly when the target node has `reached = True`."};
  return d;
}

TemplateDocument CycleDoc(bool directed) {
  TemplateDocument d;
  d.title = directed ? "Cycle Detection (directed)" : "Cycle Detection";
  d.summary =
      directed
          ? "Repeatedly removes nodes without remaining incoming edges; any "
            "node that can never be removed lies on or after a cycle."
          : "Repeatedly removes leaves (nodes with at most one remaining "
            "neighbor); any node that can never be removed lies on a cycle.";
  d.state_docs = {
      "Boolean, whether the node is still part of the pruned graph.",
      directed ? "Integer, number of incoming edges from nodes still active."
               : "Integer, number of edges to neighbors still active (a "
                 "self-loop counts twice)."};
  d.message_docs = {"Boolean, always True: the sender has been removed."};
  d.initialization = {
      "Set `active = True`.",
      directed ? "Set `current_degree` to the node's in-degree."
               : "Set `current_degree` to the node's degree."};
  d.send = {directed
                ? "If `active` is True and `current_degree` is 0, send "
                  "`pruned: True` to every out-neighbor."
                : "If `active` is True and `current_degree` is at most 1, "
                  "send `pruned: True` to every neighbor."};
  d.update = {
      directed ? "If `active` is True and `current_degree` is 0, set "
                 "`active = False` (the node announced its removal)."
               : "If `active` is True and `current_degree` is at most 1, set "
                 "`active = False` (the node announced its removal).",
      "Decrease `current_degree` by the number of received messages."};
  d.termination = {
      "No node changes its state during a full round. The graph has a cycle "
      "exactly when some node is still active."};
  return d;
}

TemplateDocument BipartiteDoc() {
  TemplateDocument d;
  d.title = "Bipartite Check";
  d.summary =
      "Two-colors the graph by flooding alternating colors; a node that "
      "receives its own color proves an odd cycle.";
  d.state_docs = {"Integer 0 or 1, the node's side; unset until colored.",
                  "Boolean, whether a neighbor with the same color was seen.",
                  "Integer, the round in which the node was colored; unset "
                  "until colored."};
  d.message_docs = {"Integer, the sender's color."};
  d.initialization = {
      "For the node with the smallest id, set `color = 0` and "
      "`colored_at = 0`.",
      "For every other node, leave `color` and `colored_at` unset.",
      "Set `conflict = False`."};
  d.send = {
      "If the node was colored in the current round (`colored_at` equals the "
      "round number), send `color` to every neighbor.",
      "Otherwise send nothing."};
  d.update = {
      "If `color` is unset and messages arrived, take the first message (in "
      "sender order), set `color = 1 - received color` and `colored_at` to "
      "the current round.",
      "If any received color equals the node's own color, set "
      "`conflict = True`."};
  d.termination = {
      "A round with no state change and no uncolored node left. When a "
      "round is quiet but uncolored nodes remain, the master colors the "
      "smallest uncolored node 0 and execution continues. The graph is "
      "bipartite exactly when no node has `conflict = True`."};
  return d;
}

TemplateDocument TopologicalDoc() {
  TemplateDocument d;
  d.title = "Topological Sort";
  d.summary =
      "Assigns every node of a directed acyclic graph the round in which all "
      "of its predecessors have been placed; sorting by (layer, id) gives a "
      "topological order.";
  d.state_docs = {
      "Integer, number of incoming edges from nodes not yet placed.",
      "Integer, the round in which the node was placed; unset until placed."};
  d.message_docs = {"Integer, the sender's layer."};
  d.initialization = {
      "Set `remaining_in_degree` to the node's in-degree.",
      "If `remaining_in_degree` is 0, set `layer = 0`; otherwise leave it "
      "unset."};
  d.send = {
      "If `layer` equals the current round, send `layer` to every "
      "out-neighbor.",
      "Otherwise send nothing."};
  d.update = {
      "Decrease `remaining_in_degree` by the number of received messages.",
      "If `layer` is unset and `remaining_in_degree` is now 0, set `layer` to "
      "the current round."};
  d.termination = {
      "No node changes its state during a full round. Output nodes sorted by "
      "(layer, node id); a node without a layer means the graph has a cycle."};
  return d;
}

TemplateDocument TriangleDoc() {
  TemplateDocument d;
  d.title = "Maximum Triangle Sum";
  d.summary =
      "Finds the largest sum of node weights over three mutually connected "
      "nodes using one exchange of neighbor sets.";
  d.state_docs = {
      "Number, the largest weight sum over triangles containing this node; "
      "unset when none is known."};
  d.message_docs = {"Number, the sender's node weight.",
                    "List of node ids, the sender's neighbors."};
  d.initialization = {"Leave `best_sum` unset."};
  d.send = {
      "In round 0 only, send the node's weight and its neighbor list to "
      "every neighbor.",
      "In later rounds send nothing."};
  d.update = {
      "For every pair of received messages from nodes u and w where w "
      "appears in u's neighbor list, the three nodes form a triangle with "
      "sum weight(u) + own weight + weight(w).",
      "Set `best_sum` to the largest such sum, if any."};
  d.termination = {
      "No node changes its state during a full round. The answer is the "
      "maximum `best_sum` over all nodes."};
  return d;
}

TemplateDocument ReachabilityDoc() {
  TemplateDocument d;
  d.title = "Breadth-First Reachability Tree";
  d.summary =
      "Floods from a source along directed edges, recording for every node "
      "the smallest-id neighbor that reached it first. Used by the master "
      "to find shortest augmenting paths in maximum flow.";
  d.state_docs = {"Boolean, whether the source reaches this node.",
                  "Node id of the node that first reached this node; unset "
                  "for the source and unreached nodes."};
  d.message_docs = {"Boolean, always True: the sender is reached."};
  d.initialization = {"Set `reached = True` for the source, `False` otherwise.",
                      "Leave `parent` unset."};
  d.send = {"If `reached` is True, send `reached: True` to every out-neighbor."};
  d.update = {
      "If `reached` is False and messages arrived, set `reached = True` and "
      "`parent` to the smallest sender id."};
  d.termination = {"The stop node is reached.",
                   "No node changes its state during a full round."};
  return d;
}

TemplateDocument PageRankDoc() {
  TemplateDocument d;
  d.title = "PageRank";
  d.summary =
      "Iteratively estimates node importance: each node splits its rank "
      "evenly across its outgoing edges.";
  d.state_docs = {"Number, the node's current rank.",
                  "Number, absolute change of `rank` in the last update; "
                  "unset before the first update."};
  d.message_docs = {"Number, the sender's rank divided by its out-degree."};
  d.initialization = {"Set `rank = 1 / N` where N is the number of nodes.",
                      "Leave `delta` unset."};
  d.send = {
      "If the node has out-neighbors, send `share = rank / out-degree` to "
      "each of them.",
      "A node without out-neighbors sends nothing; its rank is spread "
      "evenly over all nodes as the dangling mass."};
  d.update = {
      "Sum the received shares.",
      "Set new rank = (1 - d) / N + d * (sum of shares + dangling mass / N), "
      "with damping factor d.",
      "Set `delta = |new rank - rank|` and `rank = new rank`."};
  d.termination = {"Every node has `delta` below epsilon.",
                   "Or the maximum number of iterations is reached."};
  return d;
}

TemplateDocument HamiltonDoc() {
  TemplateDocument d;
  d.title = "Hamilton Path (heuristic)";
  d.summary =
      "Heuristic search for a Hamiltonian path by propagating path lengths. "
      "A \"No\" answer is not a proof.";
  d.state_docs = {"Boolean indicating if the node has been visited.",
                  "Integer representing the current length of the path.",
                  "Integer tracking the longest path found."};
  d.message_docs = {"The current path length from the sender.",
                    "The maximum path length known to the sender.",
                    "Boolean indicating whether the sender has visited the node."};
  d.initialization = {
      "Set `visited = False`, `path_length = 0`, and `max_path_length = 1` "
      "for all nodes.",
      "For the initial node (the node with the smallest id), set "
      "`visited = True` and `path_length = 1`."};
  d.send = {
      "If `visited` is `False`, construct for each neighbor the message "
      "(path_length + 1, max(max_path_length, path_length + 1), visited).",
      "Send the constructed messages to all neighbors."};
  d.update = {
      "Consider only received messages whose `visited_flag` is `False`.",
      "If there is at least one, set `visited = True`.",
      "Set `path_length` to the maximum of its current value and the "
      "largest received `path_length`, plus 1.",
      "Set `max_path_length` to the maximum of its current value and the "
      "largest received `max_path_length`."};
  d.termination = {
      "A node reaches a `path_length` equal to the total number of nodes "
      "(a Hamiltonian path exists).",
      "Or a number of rounds equal to the number of nodes (N) passes "
      "without that happening."};
  return d;
}

}  // namespace

VertexProgram ShortestPathProgram(const Graph& g, NodeId source) {
  RequireNode(g, source, "source");
  for (const auto& e : g.edges()) {
    if (e.weight && *e.weight < 0) {
      throw Error(ErrorCode::kNegativeWeight,
                  "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                      ") has weight " + FormatNumber(*e.weight));
    }
  }
  VertexProgram p;
  p.name = program_names::kShortestPath;
  p.state_schema = {Num("distance", false, true)};
  p.message_schema = {Num("new_distance", false, true)};
  p.params = {{"source", NodeRef{source}}};
  p.init = [](const NodeContext& ctx) {
    VertexState s;
    if (ctx.id == ParamNode(ctx, "source")) {
      s.set("distance", 0.0);
    } else {
      s.set("distance", Infinity{});
    }
    return s;
  };
  p.send = [](const NodeContext& ctx, const VertexState& s) {
    std::vector<MessageEnvelope> out;
    const Value& d = s.at("distance");
    for (const auto& n : ctx.targets()) {
      FieldMap payload;
      payload.set("new_distance", AddDistance(d, n.weight.value_or(1.0)));
      out.push_back({ctx.id, n.id, std::move(payload)});
    }
    return out;
  };
  p.update = [](const NodeContext&, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    Value best = s.at("distance");
    for (const auto& m : inbox) {
      const Value& candidate = m.payload.at("new_distance");
      if (DistanceLess(candidate, best)) best = candidate;
    }
    VertexState next = s;
    next.set("distance", best);
    return next;
  };
  p.doc = ShortestPathDoc();
  return p;
}

VertexProgram ConnectivityProgram(const Graph& g, NodeId source, NodeId target) {
  RequireNode(g, source, "source");
  RequireNode(g, target, "target");
  VertexProgram p;
  p.name = program_names::kConnectivity;
  p.state_schema = {Bool("reached")};
  p.message_schema = {Bool("reached")};
  p.params = {{"source", NodeRef{source}}, {"target", NodeRef{target}}};
  p.init = [](const NodeContext& ctx) {
    return VertexState{{"reached", ctx.id == ParamNode(ctx, "source")}};
  };
  p.send = [](const NodeContext& ctx, const VertexState& s) {
    if (!s.get<bool>("reached")) return std::vector<MessageEnvelope>{};
    return Broadcast(ctx, FieldMap{{"reached", true}});
  };
  p.update = [](const NodeContext&, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    return VertexState{{"reached", s.get<bool>("reached") || !inbox.empty()}};
  };
  p.doc = ConnectivityDoc();
  return p;
}

VertexProgram CycleDetectionProgram(const Graph& g) {
  VertexProgram p;
  p.name = program_names::kCycleDetection;
  p.state_schema = {Bool("active"), Int("current_degree")};
  p.message_schema = {Bool("pruned")};
  const std::int64_t threshold = g.directed() ? 0 : 1;
  p.init = [](const NodeContext& ctx) {
    std::size_t degree = ctx.graph.directed() ? ctx.graph.in_degree(ctx.id)
                                              : ctx.graph.degree(ctx.id);
    return VertexState{{"active", true}, {"current_degree", AsInt(degree)}};
  };
  p.send = [threshold](const NodeContext& ctx, const VertexState& s) {
    if (s.get<bool>("active") &&
        s.get<std::int64_t>("current_degree") <= threshold) {
      return Broadcast(ctx, FieldMap{{"pruned", true}});
    }
    return std::vector<MessageEnvelope>{};
  };
  p.update = [threshold](const NodeContext&, const VertexState& s,
                         std::span<const MessageEnvelope> inbox) {
    bool active = s.get<bool>("active");
    std::int64_t degree = s.get<std::int64_t>("current_degree");
    if (active && degree <= threshold) active = false;
    degree -= AsInt(inbox.size());
    return VertexState{{"active", active}, {"current_degree", degree}};
  };
  p.doc = CycleDoc(g.directed());
  return p;
}

VertexProgram BipartiteProgram(const Graph& g) {
  if (g.directed()) {
    throw Error(ErrorCode::kInvalidArgument,
                "bipartite check runs on the undirected graph");
  }
  VertexProgram p;
  p.name = program_names::kBipartite;
  p.state_schema = {Int("color", true), Bool("conflict"), Int("colored_at", true)};
  p.message_schema = {Int("color")};
  p.init = [](const NodeContext& ctx) {
    VertexState s{{"color", std::monostate{}},
                  {"conflict", false},
                  {"colored_at", std::monostate{}}};
    if (ctx.id == ctx.graph.node_ids().front()) {
      s.set("color", std::int64_t{0});
      s.set("colored_at", std::int64_t{0});
    }
    return s;
  };
  p.send = [](const NodeContext& ctx, const VertexState& s) {
    if (s.is_unset("colored_at") ||
        s.get<std::int64_t>("colored_at") != AsInt(ctx.superstep)) {
      return std::vector<MessageEnvelope>{};
    }
    return Broadcast(ctx, FieldMap{{"color", s.at("color")}});
  };
  p.update = [](const NodeContext& ctx, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    VertexState next = s;
    if (inbox.empty()) return next;
    if (next.is_unset("color")) {
      next.set("color", 1 - inbox.front().payload.get<std::int64_t>("color"));
      next.set("colored_at", AsInt(ctx.superstep));
    }
    std::int64_t own = next.get<std::int64_t>("color");
    for (const auto& m : inbox) {
      if (m.payload.get<std::int64_t>("color") == own) next.set("conflict", true);
    }
    return next;
  };
  p.select_seed = [](const Graph& graph,
                     std::span<const VertexState> states) -> std::optional<NodeId> {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].is_unset("color")) return graph.node_ids()[i];
    }
    return std::nullopt;
  };
  p.seed = [](const NodeContext& ctx, const VertexState& s) {
    VertexState next = s;
    next.set("color", std::int64_t{0});
    next.set("colored_at", AsInt(ctx.superstep));
    return next;
  };
  // Each component needs its own coloring rounds plus one quiet round.
  p.default_cap = [](std::size_t n) { return 2 * n + 1; };
  p.doc = BipartiteDoc();
  return p;
}

VertexProgram TopologicalSortProgram(const Graph& g) {
  if (!g.directed()) {
    throw Error(ErrorCode::kInvalidArgument,
                "topological sort requires a directed graph");
  }
  VertexProgram p;
  p.name = program_names::kTopologicalSort;
  p.state_schema = {Int("remaining_in_degree"), Int("layer", true)};
  p.message_schema = {Int("layer")};
  p.init = [](const NodeContext& ctx) {
    auto in = AsInt(ctx.graph.in_degree(ctx.id));
    VertexState s{{"remaining_in_degree", in}, {"layer", std::monostate{}}};
    if (in == 0) s.set("layer", std::int64_t{0});
    return s;
  };
  p.send = [](const NodeContext& ctx, const VertexState& s) {
    if (s.is_unset("layer") ||
        s.get<std::int64_t>("layer") != AsInt(ctx.superstep)) {
      return std::vector<MessageEnvelope>{};
    }
    return Broadcast(ctx, FieldMap{{"layer", s.at("layer")}});
  };
  p.update = [](const NodeContext& ctx, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    VertexState next = s;
    auto remaining = s.get<std::int64_t>("remaining_in_degree") - AsInt(inbox.size());
    next.set("remaining_in_degree", remaining);
    if (next.is_unset("layer") && remaining == 0) {
      next.set("layer", AsInt(ctx.superstep));
    }
    return next;
  };
  p.doc = TopologicalDoc();
  return p;
}

VertexProgram TriangleSumProgram(const Graph& g) {
  if (g.directed()) {
    throw Error(ErrorCode::kInvalidArgument,
                "triangle sum runs on the undirected graph");
  }
  if (g.weighted()) {
    throw Error(ErrorCode::kInvalidArgument,
                "triangle sum uses node weights; edge-weighted input is not "
                "supported");
  }
  for (NodeId v : g.node_ids()) {
    if (!g.node_weight(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "node " + std::to_string(v) + " has no weight");
    }
  }
  VertexProgram p;
  p.name = program_names::kTriangleSum;
  p.state_schema = {Num("best_sum", true)};
  p.message_schema = {Num("weight"),
                      {"neighbors", ValueKind::kNodeList, false, false}};
  p.init = [](const NodeContext&) {
    return VertexState{{"best_sum", std::monostate{}}};
  };
  p.send = [](const NodeContext& ctx, const VertexState&) {
    if (ctx.superstep != 0) return std::vector<MessageEnvelope>{};
    NodeList neighbors;
    for (const auto& n : ctx.targets()) {
      if (n.id != ctx.id) neighbors.push_back(n.id);
    }
    FieldMap payload{{"weight", *ctx.graph.node_weight(ctx.id)},
                     {"neighbors", neighbors}};
    return Broadcast(ctx, payload, /*include_self=*/false);
  };
  p.update = [](const NodeContext& ctx, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    VertexState next = s;
    std::optional<double> best;
    if (!s.is_unset("best_sum")) best = s.get<double>("best_sum");
    const double own = *ctx.graph.node_weight(ctx.id);
    for (std::size_t a = 0; a < inbox.size(); ++a) {
      const auto& list = inbox[a].payload.get<NodeList>("neighbors");
      std::unordered_set<NodeId> adjacent(list.begin(), list.end());
      for (std::size_t b = a + 1; b < inbox.size(); ++b) {
        if (!adjacent.contains(inbox[b].sender)) continue;
        double sum = inbox[a].payload.get<double>("weight") + own +
                     inbox[b].payload.get<double>("weight");
        if (!best || sum > *best) best = sum;
      }
    }
    if (best) next.set("best_sum", *best);
    return next;
  };
  p.doc = TriangleDoc();
  return p;
}

VertexProgram ReachabilityTreeProgram(const Graph& g, NodeId source,
                                      std::optional<NodeId> stop_at) {
  RequireNode(g, source, "source");
  VertexProgram p;
  p.name = program_names::kReachabilityTree;
  p.state_schema = {Bool("reached"), Node("parent", true)};
  p.message_schema = {Bool("reached")};
  p.params = {{"source", NodeRef{source}}};
  if (stop_at) {
    RequireNode(g, *stop_at, "stop");
    p.params.set("stop_at", NodeRef{*stop_at});
    NodeId stop = *stop_at;
    p.terminate = [stop](const Graph& graph, std::span<const VertexState> states,
                         std::size_t) {
      return states[graph.index_of(stop)].get<bool>("reached");
    };
  }
  p.init = [](const NodeContext& ctx) {
    return VertexState{{"reached", ctx.id == ParamNode(ctx, "source")},
                       {"parent", std::monostate{}}};
  };
  p.send = [](const NodeContext& ctx, const VertexState& s) {
    if (!s.get<bool>("reached")) return std::vector<MessageEnvelope>{};
    return Broadcast(ctx, FieldMap{{"reached", true}});
  };
  p.update = [](const NodeContext&, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    if (s.get<bool>("reached") || inbox.empty()) return s;
    return VertexState{{"reached", true}, {"parent", NodeRef{inbox.front().sender}}};
  };
  p.doc = ReachabilityDoc();
  return p;
}

VertexProgram PageRankProgram(const Graph& g, const PageRankOptions& options) {
  if (!(options.damping >= 0 && options.damping <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "damping must lie in [0, 1]");
  }
  if (!(options.epsilon > 0) || options.max_iterations == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "epsilon must be positive and max_iterations at least 1");
  }
  (void)g;
  VertexProgram p;
  p.name = program_names::kPageRank;
  p.state_schema = {Num("rank"), Num("delta", true)};
  p.message_schema = {Num("share")};
  p.params = {{"damping", options.damping}, {"epsilon", options.epsilon}};
  p.init = [](const NodeContext& ctx) {
    return VertexState{{"rank", 1.0 / static_cast<double>(ctx.graph.node_count())},
                       {"delta", std::monostate{}}};
  };
  p.send = [](const NodeContext& ctx, const VertexState& s) {
    auto targets = ctx.targets();
    if (targets.empty()) return std::vector<MessageEnvelope>{};
    double share = s.get<double>("rank") / static_cast<double>(targets.size());
    return Broadcast(ctx, FieldMap{{"share", share}});
  };
  p.aggregate = [](const Graph& graph, std::span<const VertexState> states) {
    double dangling = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (graph.out_degree(graph.node_ids()[i]) == 0) {
        dangling += states[i].get<double>("rank");
      }
    }
    return FieldMap{{"dangling_mass", dangling}};
  };
  p.update = [](const NodeContext& ctx, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    const double d = ctx.params.get<double>("damping");
    const double n = static_cast<double>(ctx.graph.node_count());
    double incoming = 0;
    for (const auto& m : inbox) incoming += m.payload.get<double>("share");
    double dangling =
        ctx.globals.has("dangling_mass") ? ctx.globals.get<double>("dangling_mass") : 0;
    double rank = (1 - d) / n + d * (incoming + dangling / n);
    return VertexState{{"rank", rank},
                       {"delta", std::fabs(rank - s.get<double>("rank"))}};
  };
  const double epsilon = options.epsilon;
  p.terminate = [epsilon](const Graph&, std::span<const VertexState> states,
                          std::size_t) {
    for (const auto& s : states) {
      if (s.is_unset("delta") || s.get<double>("delta") >= epsilon) return false;
    }
    return !states.empty();
  };
  const std::size_t cap = options.max_iterations;
  p.default_cap = [cap](std::size_t) { return cap; };
  p.doc = PageRankDoc();
  return p;
}

VertexProgram HamiltonHeuristicProgram(const Graph& g) {
  if (g.node_count() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty graph");
  }
  VertexProgram p;
  p.name = program_names::kHamiltonHeuristic;
  p.heuristic = true;
  p.state_schema = {Bool("visited"), Int("path_length"), Int("max_path_length")};
  p.message_schema = {Int("path_length"), Int("max_path_length"),
                      Bool("visited_flag")};
  p.params = {{"start", NodeRef{g.node_ids().front()}}};
  p.init = [](const NodeContext& ctx) {
    bool start = ctx.id == ParamNode(ctx, "start");
    return VertexState{{"visited", start},
                       {"path_length", std::int64_t{start ? 1 : 0}},
                       {"max_path_length", std::int64_t{1}}};
  };
  p.send = [](const NodeContext& ctx, const VertexState& s) {
    if (s.get<bool>("visited")) return std::vector<MessageEnvelope>{};
    auto length = s.get<std::int64_t>("path_length") + 1;
    FieldMap payload{
        {"path_length", length},
        {"max_path_length", std::max(s.get<std::int64_t>("max_path_length"), length)},
        {"visited_flag", false}};
    return Broadcast(ctx, payload);
  };
  p.update = [](const NodeContext&, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    VertexState next = s;
    std::optional<std::int64_t> longest;
    std::int64_t max_known = s.get<std::int64_t>("max_path_length");
    for (const auto& m : inbox) {
      if (m.payload.get<bool>("visited_flag")) continue;
      longest = std::max(longest.value_or(0), m.payload.get<std::int64_t>("path_length"));
      max_known = std::max(max_known, m.payload.get<std::int64_t>("max_path_length"));
    }
    if (!longest) return next;
    next.set("visited", true);
    next.set("path_length",
             std::max(s.get<std::int64_t>("path_length"), *longest) + 1);
    next.set("max_path_length", max_known);
    return next;
  };
  p.terminate = [](const Graph& graph, std::span<const VertexState> states,
                   std::size_t) {
    const auto n = AsInt(graph.node_count());
    return std::any_of(states.begin(), states.end(), [n](const VertexState& s) {
      return s.get<std::int64_t>("path_length") >= n;
    });
  };
  p.default_cap = [](std::size_t n) { return n; };
  p.doc = HamiltonDoc();
  return p;
}

std::vector<LibraryTemplate> AlgorithmLibrary() {
  const Graph undirected({0, 1}, {{0, 1, 1.0, std::nullopt}}, false, true);
  const Graph plain({0, 1}, {{0, 1, std::nullopt, std::nullopt}}, false, false,
                    {{0, 1.0}, {1, 1.0}});
  const Graph directed({0, 1}, {{0, 1, std::nullopt, std::nullopt}}, true, false);
  auto entry = [](const VertexProgram& p) {
    return LibraryTemplate{p.name, p.doc.summary, RenderTemplate(p)};
  };
  return {
      entry(ShortestPathProgram(undirected, 0)),
      entry(ConnectivityProgram(plain, 0, 1)),
      entry(CycleDetectionProgram(plain)),
      [&] {
        auto e = entry(CycleDetectionProgram(directed));
        e.name += "_directed";
        return e;
      }(),
      entry(BipartiteProgram(plain)),
      entry(TopologicalSortProgram(directed)),
      entry(TriangleSumProgram(plain)),
      entry(ReachabilityTreeProgram(directed, 0, 1)),
      entry(PageRankProgram(directed)),
      entry(HamiltonHeuristicProgram(plain)),
  };
}

}  // namespace nodeagent
