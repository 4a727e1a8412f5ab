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

#ifndef NODEAGENT_GRAPH_H_
#define NODEAGENT_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nodeagent {

// Node ids are kept exactly as written in the problem text.
using NodeId = std::int64_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  std::optional<double> weight;
  std::optional<std::string> feature;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId id = 0;
  std::optional<double> weight;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Immutable graph built from an edge list. Adjacency lists are sorted by
// neighbor id. For undirected graphs neighbors() and in_neighbors() coincide.
class Graph {
 public:
  Graph() = default;

  // Validates endpoints and weights, drops duplicate edges (recorded in
  // warnings()) and builds adjacency. Throws nodeagent::Error.
  Graph(std::vector<NodeId> node_ids, std::vector<Edge> edges, bool directed,
        bool weighted, std::map<NodeId, double> node_weights = {},
        std::map<NodeId, std::string> node_features = {});

  std::size_t node_count() const { return node_ids_.size(); }
  std::span<const NodeId> node_ids() const { return node_ids_; }
  std::span<const Edge> edges() const { return edges_; }
  bool directed() const { return directed_; }
  bool weighted() const { return weighted_; }
  const std::map<NodeId, double>& node_weights() const { return node_weights_; }
  const std::map<NodeId, std::string>& node_features() const {
    return node_features_;
  }
  std::span<const std::string> warnings() const { return warnings_; }

  bool contains(NodeId v) const { return index_.contains(v); }
  // Dense position of v in node_ids(). Throws UnknownNode.
  std::size_t index_of(NodeId v) const;

  // Out-neighbors for directed graphs, all adjacent nodes otherwise.
  std::span<const Neighbor> neighbors(NodeId v) const;
  std::span<const Neighbor> in_neighbors(NodeId v) const;

  std::size_t out_degree(NodeId v) const { return neighbors(v).size(); }
  std::size_t in_degree(NodeId v) const { return in_neighbors(v).size(); }
  // Undirected degree; a self-loop contributes two.
  std::size_t degree(NodeId v) const;
  bool has_self_loop(NodeId v) const;
  bool adjacent(NodeId u, NodeId v) const;
  std::optional<double> node_weight(NodeId v) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<NodeId> node_ids_;
  std::vector<Edge> edges_;
  bool directed_ = false;
  bool weighted_ = false;
  std::map<NodeId, double> node_weights_;
  std::map<NodeId, std::string> node_features_;
  std::vector<std::string> warnings_;

  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<Neighbor>> out_;
  std::vector<std::vector<Neighbor>> in_;
};

// Parses the edge-list problem format: a node clause ("The graph has N
// nodes" or "The nodes are numbered from a to b"), optional node weights
// ("[i, k]") and parenthesized edge tuples following the node clause.
// Tuples may be written "(u,v)", "(u, v, w)", "(u->v)" or "(u->v,w)".
Graph ParseGraph(std::string_view description, bool directed, bool weighted);

// Detects direction and weighting from the text when the caller has no
// explicit flags: arrow tuples or "directed graph" phrasing mark a
// directed graph; three-element tuples mark a weighted one.
struct GraphFormat {
  bool directed = false;
  bool weighted = false;
};
GraphFormat InferGraphFormat(std::string_view description);

// Same nodes; every directed edge u->v becomes the undirected edge {u,v}.
Graph AsUndirected(const Graph& g);

// One-line node clause, then space-separated tuples in input order.
std::string SerializeGraph(const Graph& g);

// Formats a weight without a trailing ".0" when it is integral.
std::string FormatNumber(double value);

}  // namespace nodeagent

#endif  // NODEAGENT_GRAPH_H_
