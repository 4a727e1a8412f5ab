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

#include "nodeagent/answer.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "nodeagent/errors.h"

namespace nodeagent {

std::string_view TaskName(Task task) {
  switch (task) {
    case Task::kCycle: return "cycle";
    case Task::kConnectivity: return "connectivity";
    case Task::kBipartite: return "bipartite";
    case Task::kTopoSort: return "topological_sort";
    case Task::kShortestPath: return "shortest_path";
    case Task::kTriangleSum: return "triangle_sum";
    case Task::kMaxFlow: return "max_flow";
    case Task::kPageRank: return "pagerank";
    case Task::kHamiltonHeuristic: return "hamilton";
  }
  return "unknown";
}

std::optional<Task> ParseTaskName(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  for (Task t : kAllTasks) {
    if (n == TaskName(t)) return t;
  }
  if (n == "cycle_detection") return Task::kCycle;
  if (n == "topo" || n == "toposort" || n == "topology") return Task::kTopoSort;
  if (n == "sp" || n == "shortest") return Task::kShortestPath;
  if (n == "triangle" || n == "maximum_triangle_sum") return Task::kTriangleSum;
  if (n == "flow" || n == "maxflow" || n == "maximum_flow") return Task::kMaxFlow;
  if (n == "page_rank") return Task::kPageRank;
  if (n == "hamilton_heuristic" || n == "hamiltonian") return Task::kHamiltonHeuristic;
  return std::nullopt;
}

std::string_view AnswerKindName(AnswerKind kind) {
  switch (kind) {
    case AnswerKind::kBoolean: return "Boolean";
    case AnswerKind::kNumber: return "Number";
    case AnswerKind::kOrdering: return "Ordering";
    case AnswerKind::kDistanceMap: return "DistanceMap";
    case AnswerKind::kRanking: return "Ranking";
    case AnswerKind::kNoSolution: return "NoSolution";
  }
  return "Unknown";
}

std::string FormatReal(double value) {
  if (std::isfinite(value) && std::nearbyint(value) == value &&
      std::fabs(value) < 1e15) {
    return FormatNumber(value);
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

std::optional<double> ToReal(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

[[noreturn]] void Fail(AnswerKind kind, std::string_view narrative) {
  throw Error(ErrorCode::kParseFailure,
              "no " + std::string(AnswerKindName(kind)) + " value in \"" +
                  std::string(narrative.substr(0, 120)) + "\"");
}

const char kNumberPattern[] = R"(-?[0-9]+(?:\.[0-9]+)?(?:[eE][+\-]?[0-9]+)?)";

}  // namespace

std::string BooleanNarrative(Task task, bool value) {
  switch (task) {
    case Task::kCycle:
      return value ? "Yes, there is a cycle in this graph."
                   : "No, there is no cycle in this graph.";
    case Task::kConnectivity:
      return value ? "Yes, there is a path between the two nodes."
                   : "No, there is no path between the two nodes.";
    case Task::kBipartite:
      return value ? "Yes, the graph is bipartite."
                   : "No, the graph is not bipartite.";
    case Task::kHamiltonHeuristic:
      return value ? "Yes, there is a Hamiltonian path in this graph."
                   : "No, there is no Hamiltonian path in this graph.";
    default:
      return value ? "Yes." : "No.";
  }
}

std::string NumberNarrative(Task task, double value, std::string_view context) {
  std::string subject;
  switch (task) {
    case Task::kTriangleSum:
      subject = "The maximum sum of the weights of three interconnected nodes";
      break;
    case Task::kMaxFlow:
      subject = "The maximum flow";
      break;
    case Task::kShortestPath:
      subject = "The shortest distance";
      break;
    default:
      subject = "The answer";
  }
  if (!context.empty()) subject += " " + std::string(context);
  return subject + " is " + FormatReal(value) + ".";
}

std::string OrderingNarrative(const std::vector<NodeId>& order) {
  std::string out = "A valid topological order is: [";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(order[i]);
  }
  return out + "].";
}

std::string DistanceNarrative(NodeId source, const DistanceMap& distances,
                              std::optional<NodeId> target) {
  std::ostringstream out;
  if (target) {
    auto it = std::find_if(distances.begin(), distances.end(),
                           [&](const auto& p) { return p.first == *target; });
    if (it != distances.end()) {
      if (it->second) {
        out << "The shortest distance from node " << source << " to node "
            << *target << " is " << FormatReal(*it->second) << ". ";
      } else {
        out << "Node " << *target << " is unreachable from node " << source
            << ". ";
      }
    }
  }
  out << "The shortest distances from node " << source << " are as follows: ";
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (i) out << ", ";
    out << "Node " << distances[i].first << ": ";
    if (distances[i].second) {
      out << FormatReal(*distances[i].second);
    } else {
      out << "unreachable";
    }
  }
  out << ".";
  return out.str();
}

std::string RankingNarrative(const Ranking& ranking,
                             std::optional<std::size_t> top_k) {
  std::ostringstream out;
  if (top_k && *top_k > 0) {
    std::size_t k = std::min(*top_k, ranking.size());
    out << "The " << k << " most important nodes are ";
    for (std::size_t i = 0; i < k; ++i) {
      if (i) out << (i + 1 == k ? " and " : ", ");
      out << ranking[i].first;
    }
    out << ". ";
  }
  out << "Nodes ranked by PageRank: ";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (i) out << ", ";
    out << "Node " << ranking[i].first << " (" << FormatReal(ranking[i].second) << ")";
  }
  out << ".";
  return out.str();
}

AnswerValue ParseAnswerNarrative(AnswerKind kind, std::string_view narrative) {
  std::string text(narrative);
  switch (kind) {
    case AnswerKind::kBoolean: {
      static const std::regex kYesNo(R"(^\s*(yes|no)\b)", std::regex::icase);
      std::smatch m;
      if (!std::regex_search(text, m, kYesNo)) Fail(kind, narrative);
      return std::tolower(static_cast<unsigned char>(m[1].str()[0])) == 'y';
    }
    case AnswerKind::kNumber: {
      static const std::regex kIs(std::string(R"(\bis\s+()") + kNumberPattern + ")");
      std::optional<double> last;
      for (auto it = std::sregex_iterator(text.begin(), text.end(), kIs);
           it != std::sregex_iterator(); ++it) {
        last = ToReal((*it)[1].str());
      }
      if (!last) Fail(kind, narrative);
      return *last;
    }
    case AnswerKind::kOrdering: {
      static const std::regex kList(R"(order is:\s*\[([^\]]*)\])", std::regex::icase);
      std::smatch m;
      if (!std::regex_search(text, m, kList)) Fail(kind, narrative);
      std::vector<NodeId> order;
      static const std::regex kInt(R"(-?\d+)");
      std::string body = m[1].str();
      for (auto it = std::sregex_iterator(body.begin(), body.end(), kInt);
           it != std::sregex_iterator(); ++it) {
        order.push_back(std::stoll(it->str()));
      }
      return order;
    }
    case AnswerKind::kDistanceMap: {
      static const std::regex kEntry(std::string(R"(Node (-?\d+): (unreachable|)") +
                                     kNumberPattern + ")");
      auto start = text.find("are as follows:");
      if (start == std::string::npos) Fail(kind, narrative);
      std::string body = text.substr(start);
      DistanceMap out;
      for (auto it = std::sregex_iterator(body.begin(), body.end(), kEntry);
           it != std::sregex_iterator(); ++it) {
        std::optional<double> d;
        if ((*it)[2].str() != "unreachable") d = ToReal((*it)[2].str());
        out.emplace_back(std::stoll((*it)[1].str()), d);
      }
      return out;
    }
    case AnswerKind::kRanking: {
      static const std::regex kEntry(std::string(R"(Node (-?\d+) \(()") +
                                     kNumberPattern + R"()\))");
      auto start = text.find("ranked by PageRank:");
      if (start == std::string::npos) Fail(kind, narrative);
      std::string body = text.substr(start);
      Ranking out;
      for (auto it = std::sregex_iterator(body.begin(), body.end(), kEntry);
           it != std::sregex_iterator(); ++it) {
        out.emplace_back(std::stoll((*it)[1].str()), *ToReal((*it)[2].str()));
      }
      return out;
    }
    case AnswerKind::kNoSolution:
      return std::monostate{};
  }
  Fail(kind, narrative);
}

namespace {

struct Compact {
  std::string operator()(std::monostate) const { return "none"; }
  std::string operator()(bool b) const { return b ? "Yes" : "No"; }
  std::string operator()(double d) const { return FormatReal(d); }
  std::string operator()(const std::vector<NodeId>& order) const {
    std::string out = "[";
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i) out += " ";
      out += std::to_string(order[i]);
    }
    return out + "]";
  }
  std::string operator()(const DistanceMap& d) const {
    std::string out = "{";
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i) out += " ";
      out += std::to_string(d[i].first) + ":" +
             (d[i].second ? FormatReal(*d[i].second) : std::string("inf"));
    }
    return out + "}";
  }
  std::string operator()(const Ranking& r) const {
    std::string out = "[";
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += " ";
      out += std::to_string(r[i].first) + ":" + FormatReal(r[i].second);
    }
    return out + "]";
  }
};

struct ToJson {
  nlohmann::json operator()(std::monostate) const { return nullptr; }
  nlohmann::json operator()(bool b) const { return b; }
  nlohmann::json operator()(double d) const { return d; }
  nlohmann::json operator()(const std::vector<NodeId>& order) const { return order; }
  nlohmann::json operator()(const DistanceMap& d) const {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [node, dist] : d) {
      obj[std::to_string(node)] = dist ? nlohmann::json(*dist) : nlohmann::json(nullptr);
    }
    return obj;
  }
  nlohmann::json operator()(const Ranking& r) const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [node, rank] : r) arr.push_back({{"node", node}, {"rank", rank}});
    return arr;
  }
};

}  // namespace

std::string CompactValue(const AnswerValue& value) { return std::visit(Compact{}, value); }

std::string ValueToJson(const AnswerValue& value) {
  return std::visit(ToJson{}, value).dump();
}

}  // namespace nodeagent
