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

#include "nodeagent/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>
#include <utility>

#include "nodeagent/errors.h"

namespace nodeagent {

Graph::Graph(std::vector<NodeId> node_ids, std::vector<Edge> edges,
             bool directed, bool weighted,
             std::map<NodeId, double> node_weights,
             std::map<NodeId, std::string> node_features)
    : node_ids_(std::move(node_ids)),
      directed_(directed),
      weighted_(weighted),
      node_weights_(std::move(node_weights)),
      node_features_(std::move(node_features)) {
  std::sort(node_ids_.begin(), node_ids_.end());
  node_ids_.erase(std::unique(node_ids_.begin(), node_ids_.end()),
                  node_ids_.end());
  index_.reserve(node_ids_.size());
  for (std::size_t i = 0; i < node_ids_.size(); ++i) index_[node_ids_[i]] = i;

  for (const auto& [v, w] : node_weights_) {
    if (!contains(v)) {
      throw Error(ErrorCode::kEndpointOutOfRange,
                  "node weight for undeclared node " + std::to_string(v));
    }
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::kMalformedTuple, "non-finite node weight");
    }
  }

  out_.resize(node_ids_.size());
  in_.resize(node_ids_.size());
  std::set<std::pair<NodeId, NodeId>> seen;
  edges_.reserve(edges.size());
  for (auto& e : edges) {
    if (!contains(e.src) || !contains(e.dst)) {
      throw Error(ErrorCode::kEndpointOutOfRange,
                  "edge (" + std::to_string(e.src) + "," +
                      std::to_string(e.dst) + ") references an undeclared node");
    }
    if (weighted_ && !e.weight) {
      throw Error(ErrorCode::kMalformedTuple, "weighted graph edge without weight");
    }
    if (!weighted_ && e.weight) {
      throw Error(ErrorCode::kMalformedTuple, "unweighted graph edge with weight");
    }
    if (e.weight && !std::isfinite(*e.weight)) {
      throw Error(ErrorCode::kMalformedTuple, "non-finite edge weight");
    }
    std::pair<NodeId, NodeId> key(e.src, e.dst);
    if (!directed_ && key.first > key.second) std::swap(key.first, key.second);
    if (!seen.insert(key).second) {
      warnings_.push_back("duplicate edge (" + std::to_string(e.src) + "," +
                          std::to_string(e.dst) + ") dropped");
      continue;
    }
    out_[index_[e.src]].push_back({e.dst, e.weight});
    in_[index_[e.dst]].push_back({e.src, e.weight});
    if (!directed_ && e.src != e.dst) {
      out_[index_[e.dst]].push_back({e.src, e.weight});
      in_[index_[e.src]].push_back({e.dst, e.weight});
    }
    edges_.push_back(std::move(e));
  }
  auto by_id = [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; };
  for (auto& adj : out_) std::sort(adj.begin(), adj.end(), by_id);
  for (auto& adj : in_) std::sort(adj.begin(), adj.end(), by_id);
}

std::size_t Graph::index_of(NodeId v) const {
  auto it = index_.find(v);
  if (it == index_.end()) {
    throw Error(ErrorCode::kUnknownNode, "node " + std::to_string(v));
  }
  return it->second;
}

std::span<const Neighbor> Graph::neighbors(NodeId v) const {
  return out_[index_of(v)];
}

std::span<const Neighbor> Graph::in_neighbors(NodeId v) const {
  return in_[index_of(v)];
}

std::size_t Graph::degree(NodeId v) const {
  if (directed_) return out_degree(v) + in_degree(v);
  return neighbors(v).size() + (has_self_loop(v) ? 1 : 0);
}

bool Graph::has_self_loop(NodeId v) const { return adjacent(v, v); }

bool Graph::adjacent(NodeId u, NodeId v) const {
  auto adj = neighbors(u);
  return std::binary_search(
      adj.begin(), adj.end(), Neighbor{v, std::nullopt},
      [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
}

std::optional<double> Graph::node_weight(NodeId v) const {
  auto it = node_weights_.find(v);
  if (it == node_weights_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.node_ids_ == b.node_ids_ && a.edges_ == b.edges_ &&
         a.directed_ == b.directed_ && a.weighted_ == b.weighted_ &&
         a.node_weights_ == b.node_weights_ &&
         a.node_features_ == b.node_features_;
}

namespace {

struct NodeClause {
  std::vector<NodeId> ids;
  std::size_t end = 0;  // offset just past the clause
};

std::optional<NodeClause> FindNodeClause(const std::string& text) {
  static const std::regex kCount(R"(graph\s+has\s+(\d+)\s+nodes?)",
                                 std::regex::icase);
  static const std::regex kRange(
      R"(nodes\s+are\s+numbered\s+from\s+(-?\d+)\s+to\s+(-?\d+))",
      std::regex::icase);
  std::smatch count_match;
  std::smatch range_match;
  bool has_count = std::regex_search(text, count_match, kCount);
  bool has_range = std::regex_search(text, range_match, kRange);
  if (!has_count && !has_range) return std::nullopt;

  NodeClause clause;
  if (has_range &&
      (!has_count || range_match.position(0) < count_match.position(0))) {
    NodeId lo = std::stoll(range_match[1].str());
    NodeId hi = std::stoll(range_match[2].str());
    if (hi < lo) {
      throw Error(ErrorCode::kMissingNodeClause, "empty node range");
    }
    for (NodeId v = lo; v <= hi; ++v) clause.ids.push_back(v);
    clause.end = range_match.position(0) + range_match.length(0);
  } else {
    NodeId n = std::stoll(count_match[1].str());
    for (NodeId v = 0; v < n; ++v) clause.ids.push_back(v);
    clause.end = count_match.position(0) + count_match.length(0);
  }
  return clause;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<NodeId> ParseInteger(std::string_view s) {
  s = Trim(s);
  NodeId v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> ParseWeight(std::string_view s) {
  s = Trim(s);
  if (auto i = ParseInteger(s)) return static_cast<double>(*i);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

// Splits tuple contents on commas and the "->" arrow.
std::vector<std::string_view> SplitTuple(std::string_view body) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == ',') {
      parts.push_back(body.substr(start, i - start));
      start = i + 1;
    } else if (body[i] == '-' && i + 1 < body.size() && body[i + 1] == '>') {
      parts.push_back(body.substr(start, i - start));
      start = i + 2;
      ++i;
    }
  }
  parts.push_back(body.substr(start));
  return parts;
}

bool StartsLikeNumber(std::string_view body) {
  body = Trim(body);
  return !body.empty() &&
         (std::isdigit(static_cast<unsigned char>(body.front())) ||
          body.front() == '-');
}

// Visits every bracketed group opened by `open` whose content starts like a
// number; groups of prose in parentheses are skipped.
template <typename Fn>
void ForEachGroup(std::string_view text, char open, char close, Fn&& fn) {
  std::size_t pos = 0;
  while ((pos = text.find(open, pos)) != std::string_view::npos) {
    std::size_t end = text.find(close, pos + 1);
    if (end == std::string_view::npos) {
      std::string_view rest = text.substr(pos + 1);
      if (StartsLikeNumber(rest)) {
        throw Error(ErrorCode::kMalformedTuple,
                    "unterminated tuple \"" + std::string(text.substr(pos)) + "\"");
      }
      return;
    }
    std::string_view body = text.substr(pos + 1, end - pos - 1);
    if (StartsLikeNumber(body)) fn(body);
    pos = end + 1;
  }
}

}  // namespace

Graph ParseGraph(std::string_view description, bool directed, bool weighted) {
  std::string text(description);
  auto clause = FindNodeClause(text);
  if (!clause) {
    throw Error(ErrorCode::kMissingNodeClause,
                "expected \"The graph has N nodes\" or \"The nodes are "
                "numbered from a to b\"");
  }
  std::string_view rest = std::string_view(text).substr(clause->end);

  std::map<NodeId, double> node_weights;
  ForEachGroup(rest, '[', ']', [&](std::string_view body) {
    auto parts = SplitTuple(body);
    if (parts.size() != 2) {
      throw Error(ErrorCode::kMalformedTuple,
                  "node weight \"[" + std::string(body) + "]\" must have 2 fields");
    }
    auto id = ParseInteger(parts[0]);
    auto w = ParseWeight(parts[1]);
    if (!id || !w) {
      throw Error(ErrorCode::kMalformedTuple,
                  "node weight \"[" + std::string(body) + "]\"");
    }
    node_weights[*id] = *w;
  });

  std::vector<Edge> edges;
  const std::size_t arity = weighted ? 3 : 2;
  ForEachGroup(rest, '(', ')', [&](std::string_view body) {
    auto parts = SplitTuple(body);
    if (parts.size() != arity) {
      throw Error(ErrorCode::kMalformedTuple,
                  "tuple \"(" + std::string(body) + ")\" has " +
                      std::to_string(parts.size()) + " fields, expected " +
                      std::to_string(arity));
    }
    auto u = ParseInteger(parts[0]);
    auto v = ParseInteger(parts[1]);
    if (!u || !v) {
      throw Error(ErrorCode::kMalformedTuple,
                  "non-integer endpoint in \"(" + std::string(body) + ")\"");
    }
    Edge e{*u, *v, std::nullopt, std::nullopt};
    if (weighted) {
      auto w = ParseWeight(parts[2]);
      if (!w) {
        throw Error(ErrorCode::kMalformedTuple,
                    "bad weight in \"(" + std::string(body) + ")\"");
      }
      e.weight = *w;
    }
    edges.push_back(std::move(e));
  });

  return Graph(std::move(clause->ids), std::move(edges), directed, weighted,
               std::move(node_weights));
}

GraphFormat InferGraphFormat(std::string_view description) {
  std::string text(description);
  GraphFormat format;
  static const std::regex kDirected(R"((^|[^a-z])directed\s+(graph|edge))",
                                    std::regex::icase);
  format.directed = std::regex_search(text, kDirected);

  std::string_view rest = text;
  if (auto clause = FindNodeClause(text)) rest = rest.substr(clause->end);
  bool found = false;
  try {
    ForEachGroup(rest, '(', ')', [&](std::string_view body) {
      if (found) return;
      found = true;
      if (body.find("->") != std::string_view::npos) format.directed = true;
      format.weighted = SplitTuple(body).size() == 3;
    });
  } catch (const Error&) {
    // Left for ParseGraph to report.
  }
  return format;
}

Graph AsUndirected(const Graph& g) {
  if (!g.directed()) return g;
  std::vector<NodeId> ids(g.node_ids().begin(), g.node_ids().end());
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& e : g.edges()) {
    if (seen.insert(std::minmax(e.src, e.dst)).second) edges.push_back(e);
  }
  return Graph(std::move(ids), std::move(edges), false, g.weighted(),
               g.node_weights(), g.node_features());
}

std::string FormatNumber(double value) {
  if (std::isfinite(value) && std::nearbyint(value) == value &&
      std::fabs(value) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(value));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string SerializeGraph(const Graph& g) {
  std::ostringstream out;
  auto ids = g.node_ids();
  if (ids.empty()) {
    out << "The graph has 0 nodes";
  } else {
    out << "The nodes are numbered from " << ids.front() << " to " << ids.back();
  }
  if (!g.node_weights().empty()) {
    out << ", weights of nodes are:";
    for (const auto& [v, w] : g.node_weights()) {
      out << " [" << v << ", " << FormatNumber(w) << "]";
    }
  }
  out << ", and the edges are:";
  for (const auto& e : g.edges()) {
    out << " (" << e.src << (g.directed() ? "->" : ",") << e.dst;
    if (e.weight) out << "," << FormatNumber(*e.weight);
    out << ")";
  }
  return out.str();
}

}  // namespace nodeagent
