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

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "fnv.h"
#include "nodeagent/errors.h"
#include "nodeagent/evaluation.h"
#include "nodeagent/oracles.h"

namespace nodeagent {
namespace {

using Rng = std::mt19937_64;

struct Draft {
  std::vector<Edge> edges;
  std::map<NodeId, double> node_weights;
  bool directed = false;
  bool weighted = false;
};

int Weight(Rng& rng, const GeneratorOptions& o) {
  return std::uniform_int_distribution<int>(o.min_weight, o.max_weight)(rng);
}

bool Coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

std::size_t Pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::vector<NodeId> Permutation(Rng& rng, std::size_t n) {
  std::vector<NodeId> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Erdos-Renyi over unordered pairs of `nodes`; directed drafts orient each
// pair at random unless `forward` fixes the orientation to list order.
void AddRandomEdges(Rng& rng, const std::vector<NodeId>& nodes, double p, Draft& d,
                    const GeneratorOptions& o, bool forward = false) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (!Coin(rng, p)) continue;
      NodeId u = nodes[i], v = nodes[j];
      if (d.directed && !forward && Coin(rng, 0.5)) std::swap(u, v);
      Edge e{u, v, std::nullopt, std::nullopt};
      if (d.weighted) e.weight = Weight(rng, o);
      d.edges.push_back(e);
    }
  }
}

std::string NodeClause(std::size_t n, bool count_form) {
  if (count_form) return "The graph has " + std::to_string(n) + " nodes";
  return "The nodes are numbered from 0 to " + std::to_string(n - 1);
}

std::string EdgeList(const Draft& d) {
  std::string out;
  for (const Edge& e : d.edges) {
    out += " (" + std::to_string(e.src) + (d.directed ? "->" : ",") + std::to_string(e.dst);
    if (e.weight) out += "," + FormatNumber(*e.weight);
    out += ")";
  }
  return out;
}

std::string Describe(std::size_t n, const Draft& d, bool count_form = false) {
  std::string out = NodeClause(n, count_form);
  if (!d.node_weights.empty()) {
    out += ", weights of nodes are:";
    for (const auto& [v, w] : d.node_weights) {
      out += " [" + std::to_string(v) + ", " + FormatNumber(w) + "]";
    }
  }
  return out + ", and the edges are:" + EdgeList(d) + ".";
}

}  // namespace

NodeRange TaskNodeRange(Task task) {
  switch (task) {
    case Task::kTopoSort: return {2, 50};
    case Task::kTriangleSum: return {2, 25};
    case Task::kMaxFlow: return {2, 50};
    case Task::kHamiltonHeuristic: return {2, 20};
    default: return {2, 100};
  }
}

InstanceSpec GenerateInstance(Task task, std::size_t size, std::uint64_t seed,
                              const GeneratorOptions& options) {
  const NodeRange range = TaskNodeRange(task);
  const bool large_ok = options.allow_large && task == Task::kShortestPath;
  if (size < range.min || (size > range.max && !large_ok)) {
    throw Error(ErrorCode::kSizeOutOfRange,
                std::string(TaskName(task)) + " instances have " + std::to_string(range.min) +
                    " to " + std::to_string(range.max) + " nodes, got " + std::to_string(size));
  }
  Rng rng(internal::Fnv1a64(std::string(TaskName(task)) + "|" + std::to_string(size) + "|" +
                            std::to_string(seed)));
  const std::size_t n = size;
  const double degree = std::uniform_real_distribution<double>(options.min_mean_degree,
                                                               options.max_mean_degree)(rng);
  const double p = std::min(1.0, degree / static_cast<double>(n - 1));
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), 0);

  InstanceSpec inst;
  inst.task = task;
  inst.size = n;
  inst.seed = seed;
  inst.node_range = range;
  inst.edge_probability = p;
  Draft d;
  std::string text;
  const std::string undirected_pairs =
      "In an undirected graph, (i,j) means that node i and node j are connected with an "
      "undirected edge. ";
  const std::string directed_pairs =
      "In a directed graph, (i->j) means that node i and node j are connected with a "
      "directed edge from node i to node j. ";

  switch (task) {
    case Task::kCycle: {
      if (Coin(rng, 0.5)) {
        auto order = Permutation(rng, n);
        for (std::size_t i = 1; i < n; ++i) {
          if (Coin(rng, 0.85)) d.edges.push_back({order[Pick(rng, i)], order[i], {}, {}});
        }
      } else {
        AddRandomEdges(rng, all, p, d, options);
      }
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      text = "Determine whether or not there is a cycle in an undirected graph. " +
             undirected_pairs +
             "Given a graph, you need to output Yes or No, indicating whether there is a "
             "cycle in the graph. Q: " + Describe(n, d) + " Is there a cycle in this graph?";
      break;
    }
    case Task::kConnectivity: {
      auto order = Permutation(rng, n);
      NodeId s, t;
      if (Coin(rng, 0.5)) {
        AddRandomEdges(rng, all, p, d, options);
        s = order[0];
        t = order[1];
      } else {
        std::size_t split = std::max<std::size_t>(1, n / 2);
        std::vector<NodeId> a(order.begin(), order.begin() + static_cast<long>(split));
        std::vector<NodeId> b(order.begin() + static_cast<long>(split), order.end());
        AddRandomEdges(rng, a, p, d, options);
        AddRandomEdges(rng, b, p, d, options);
        s = a[Pick(rng, a.size())];
        t = b[Pick(rng, b.size())];
      }
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      inst.params.set("source", NodeRef{s});
      inst.params.set("target", NodeRef{t});
      text = "Determine whether two nodes are connected in an undirected graph. " +
             undirected_pairs +
             "Given a graph and a pair of nodes, you need to output Yes or No, indicating "
             "whether the node i and node j are connected. Q: " + Describe(n, d) +
             " Is there a path between node " + std::to_string(s) + " and node " +
             std::to_string(t) + "?";
      break;
    }
    case Task::kBipartite: {
      d.directed = true;
      if (Coin(rng, 0.5)) {
        std::vector<int> side(n);
        for (auto& s : side) s = Coin(rng, 0.5) ? 1 : 0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            if (side[i] == side[j] || !Coin(rng, std::min(1.0, 2 * p))) continue;
            NodeId u = static_cast<NodeId>(i), v = static_cast<NodeId>(j);
            if (Coin(rng, 0.5)) std::swap(u, v);
            d.edges.push_back({u, v, {}, {}});
          }
        }
      } else {
        AddRandomEdges(rng, all, p, d, options);
      }
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      text = "Determine whether or not a graph is bipartite. " + directed_pairs +
             "Given a graph, you need to output Yes or No, indicating whether the graph is "
             "bipartite. Q: " + Describe(n, d) + " Is this graph bipartite?";
      break;
    }
    case Task::kTopoSort: {
      d.directed = true;
      AddRandomEdges(rng, Permutation(rng, n), p, d, options, /*forward=*/true);
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      text = "Find one of the topology sorting paths of the given graph. " + directed_pairs +
             "Given a graph, you need to output one of the topology sorting paths of the "
             "graph. Q: " + Describe(n, d) + " Give one topology sorting path of this graph.";
      break;
    }
    case Task::kShortestPath: {
      d.weighted = true;
      auto order = Permutation(rng, n);
      for (std::size_t i = 1; i < n; ++i) {
        if (Coin(rng, 0.9)) {
          d.edges.push_back({order[Pick(rng, i)], order[i], Weight(rng, options), {}});
        }
      }
      // Extra edges keep the expected degree near the drawn target.
      double extra = std::max(0.0, degree - 2.0) / static_cast<double>(n - 1);
      Draft more;
      more.weighted = true;
      AddRandomEdges(rng, all, std::min(1.0, extra), more, options);
      for (const Edge& e : more.edges) {
        bool dup = std::any_of(d.edges.begin(), d.edges.end(), [&](const Edge& x) {
          return (x.src == e.src && x.dst == e.dst) || (x.src == e.dst && x.dst == e.src);
        });
        if (!dup) d.edges.push_back(e);
      }
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      NodeId source = static_cast<NodeId>(Pick(rng, n));
      inst.params.set("source", NodeRef{source});
      text = "Find the shortest distance from a source node to other nodes in an undirected "
             "graph. In an undirected graph, (i,j,k) means that node i and node j are "
             "connected with an undirected edge with weight k. " +
             Describe(n, d, /*count_form=*/true) +
             " Give the weight of the shortest distance from node " + std::to_string(source) +
             " to other node.";
      break;
    }
    case Task::kTriangleSum: {
      for (NodeId v : all) d.node_weights[v] = Weight(rng, options);
      AddRandomEdges(rng, all, p, d, options);
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      text = "Find the maximum sum of the weights of three interconnected nodes. In an "
             "undirected graph, [i, k] means that node i has the weight k. (i,j) means that "
             "node i and node j are connected with an undirected edge. Given a graph, you "
             "need to output the maximum sum of the weights of three interconnected nodes. "
             "Q: " + Describe(n, d) +
             " What is the maximum sum of the weights of three interconnected nodes?";
      break;
    }
    case Task::kMaxFlow: {
      d.directed = true;
      d.weighted = true;
      AddRandomEdges(rng, all, p, d, options);
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      auto order = Permutation(rng, n);
      inst.params.set("source", NodeRef{order[0]});
      inst.params.set("sink", NodeRef{order[1]});
      text = "Find the maximum flow between two nodes in a directed graph. In a directed "
             "graph, (i->j,k) means that node i and node j are connected with a directed "
             "edge from node i to node j with weight k. Given a graph and a pair of nodes, "
             "you need to output the maximum flow between the two nodes. Q: " +
             Describe(n, d) + " What is the maximum flow from node " +
             std::to_string(order[0]) + " to node " + std::to_string(order[1]) + "?";
      break;
    }
    case Task::kPageRank: {
      d.directed = true;
      AddRandomEdges(rng, all, p, d, options);
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      const std::size_t k = std::min<std::size_t>(3, n);
      inst.params.set("top_k", static_cast<std::int64_t>(k));
      text = "In a network of webpages, each webpage is a node and (i->j) means that "
             "webpage i links to webpage j with a directed edge. The importance of a webpage "
             "is measured by PageRank with damping factor 0.85. Q: " + Describe(n, d) +
             " Which " + std::to_string(k) + " webpages are the most important?";
      break;
    }
    case Task::kHamiltonHeuristic: {
      AddRandomEdges(rng, all, p, d, options);
      std::shuffle(d.edges.begin(), d.edges.end(), rng);
      text = "Determine whether or not there is a Hamiltonian path in an undirected graph. " +
             undirected_pairs +
             "Given a graph, you need to output Yes or No, indicating whether there is a "
             "Hamiltonian path in the graph. Q: " + Describe(n, d) +
             " Is there a Hamiltonian path in this graph?";
      break;
    }
  }
  inst.text = std::move(text);
  inst.graph = Graph(all, d.edges, d.directed, d.weighted, d.node_weights);
  inst.oracle_answer = OracleSolve(task, inst.graph, inst.params);
  return inst;
}

Answer OracleSolve(Task task, const Graph& g, const FieldMap& params) {
  auto node = [&](const char* name) {
    if (!params.has(name)) {
      throw Error(ErrorCode::kMissingParameter,
                  std::string(TaskName(task)) + " needs parameter " + name);
    }
    return params.get<NodeRef>(name).id;
  };
  Answer a;
  switch (task) {
    case Task::kCycle:
    case Task::kConnectivity:
    case Task::kBipartite:
    case Task::kHamiltonHeuristic: {
      bool v = false;
      if (task == Task::kCycle) v = OracleHasCycle(g);
      if (task == Task::kBipartite) v = OracleBipartite(g);
      if (task == Task::kHamiltonHeuristic) {
        v = OracleHamiltonPath(g);
        a.exact = v;
      }
      if (task == Task::kConnectivity) {
        NodeId s = node("source"), t = node("target");
        v = g.directed() ? static_cast<bool>(OracleReachable(g, s)[g.index_of(t)])
                         : OracleConnected(g, s, t);
      }
      a.kind = AnswerKind::kBoolean;
      a.value = v;
      a.narrative = BooleanNarrative(task, v);
      break;
    }
    case Task::kTopoSort: {
      auto order = OracleTopologicalOrder(g);
      a.kind = AnswerKind::kOrdering;
      a.narrative = OrderingNarrative(order);
      a.value = std::move(order);
      break;
    }
    case Task::kShortestPath: {
      auto dist = OracleShortestPaths(g, node("source"));
      std::optional<NodeId> target;
      if (params.has("target")) target = node("target");
      a.kind = AnswerKind::kDistanceMap;
      a.narrative = DistanceNarrative(node("source"), dist, target);
      a.value = std::move(dist);
      break;
    }
    case Task::kTriangleSum: {
      if (auto best = OracleMaxTriangleSum(g)) {
        a.kind = AnswerKind::kNumber;
        a.value = *best;
        a.narrative = NumberNarrative(task, *best, "");
      } else {
        a.kind = AnswerKind::kNoSolution;
        a.narrative = "There is no triangle in this graph.";
      }
      break;
    }
    case Task::kMaxFlow: {
      NodeId s = node("source"), t = node("sink");
      auto flow = OracleMaxFlow(g, s, t);
      a.kind = AnswerKind::kNumber;
      a.value = flow.value;
      a.narrative = NumberNarrative(task, flow.value,
                                    "from node " + std::to_string(s) + " to node " +
                                        std::to_string(t));
      break;
    }
    case Task::kPageRank: {
      auto ranks = OraclePageRank(g);
      Ranking ranking;
      for (std::size_t i = 0; i < ranks.size(); ++i) ranking.emplace_back(g.node_ids()[i], ranks[i]);
      std::stable_sort(ranking.begin(), ranking.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
      });
      std::optional<std::size_t> k;
      if (params.has("top_k")) k = static_cast<std::size_t>(params.get<std::int64_t>("top_k"));
      a.kind = AnswerKind::kRanking;
      a.narrative = RankingNarrative(ranking, k);
      a.value = std::move(ranking);
      break;
    }
  }
  return a;
}

}  // namespace nodeagent
