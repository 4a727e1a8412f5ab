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

#include "nodeagent/prompt.h"

#include <algorithm>
#include <optional>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "nodeagent/errors.h"

namespace nodeagent {

namespace {

std::string_view PhaseTitle(Phase phase) {
  switch (phase) {
    case Phase::kInit: return "Initialization";
    case Phase::kUpdate: return "Update";
    case Phase::kSend: return "Send";
  }
  return "";
}

void RenderNumbered(std::ostringstream& out, const FieldMap& fields) {
  std::size_t k = 0;
  for (const auto& [name, value] : fields) {
    out << ++k << ". " << name << ": " << RenderValue(value) << "\n";
  }
}

void RenderPlaceholders(std::ostringstream& out, const Schema& schema) {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    out << i + 1 << ". " << schema[i].name << ": <"
        << ValueKindName(schema[i].kind);
    if (schema[i].allows_infinity) out << " or \\infinity";
    if (schema[i].nullable) out << " or unset";
    out << ">\n";
  }
}

std::string Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

const FieldSpec* FindField(const Schema& schema, std::string_view name) {
  for (const auto& f : schema) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

[[noreturn]] void Fail(const std::string& why) {
  throw Error(ErrorCode::kParseFailure, why);
}

// Text after the last "## Output" heading, or nullopt.
std::optional<std::string> OutputBlock(std::string_view reply) {
  static const std::regex kOutput(R"(^[ \t]*#+[ \t]*Output[ \t]*:?[ \t]*$)",
                                  std::regex::icase | std::regex::multiline);
  std::string text(reply);
  std::optional<std::size_t> last;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kOutput);
       it != std::sregex_iterator(); ++it) {
    last = it->position(0) + it->length(0);
  }
  if (!last) return std::nullopt;
  return text.substr(*last);
}

std::optional<std::string> FencedJson(std::string_view reply) {
  static const std::regex kFence(R"(```(?:json)?\s*\n([\s\S]*?)```)");
  std::string text(reply);
  std::smatch m;
  if (!std::regex_search(text, m, kFence)) return std::nullopt;
  return m[1].str();
}

std::string JsonScalarText(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "unset";
  if (v.is_boolean()) return v.get<bool>() ? "True" : "False";
  return v.dump();
}

FieldMap FieldsFromJson(const nlohmann::json& obj, const Schema& schema) {
  if (!obj.is_object()) Fail("JSON fields must be an object");
  std::string lines;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    lines += it.key() + ": " + JsonScalarText(it.value()) + "\n";
  }
  return ParseFieldLines(lines, schema);
}

bool IsTarget(const NodeContext& ctx, NodeId id) {
  auto targets = ctx.targets();
  return std::any_of(targets.begin(), targets.end(),
                     [id](const Neighbor& n) { return n.id == id; });
}

PhaseResult ParseJsonReply(const PhaseRequest& request, const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    Fail(std::string("fenced block is not JSON: ") + e.what());
  }
  PhaseResult result{request.state, {}};
  if (request.phase != Phase::kSend) {
    if (!doc.contains("state")) Fail("JSON reply lacks \"state\"");
    result.state = FieldsFromJson(doc["state"], request.program.state_schema);
    return result;
  }
  if (!doc.contains("messages") || !doc["messages"].is_array()) {
    Fail("JSON reply lacks a \"messages\" array");
  }
  for (const auto& m : doc["messages"]) {
    if (!m.contains("to") || !m["to"].is_number_integer()) {
      Fail("message without integer \"to\"");
    }
    NodeId to = m["to"].get<NodeId>();
    if (!IsTarget(request.ctx, to)) {
      Fail("node " + std::to_string(to) + " is not a neighbor");
    }
    result.messages.push_back(
        {request.ctx.id, to,
         FieldsFromJson(m.value("payload", nlohmann::json::object()),
                        request.program.message_schema)});
  }
  return result;
}

}  // namespace

PhasePrompt RenderPhasePrompt(const PhaseRequest& request) {
  const NodeContext& ctx = request.ctx;
  const VertexProgram& program = request.program;
  PhasePrompt prompt;
  {
    std::ostringstream sys;
    sys << "You are the agent for one node of a graph. All nodes run the same "
           "distributed algorithm in synchronized rounds and only talk to "
           "their neighbors. Follow the algorithm below exactly.\n\n"
        << RenderTemplate(program);
    prompt.system = sys.str();
  }

  std::ostringstream out;
  out << "### Task\nPerform the " << PhaseTitle(request.phase)
      << " step for your node.\n";
  out << "## Input\n";
  out << "Node Id: " << ctx.id << "\n";
  out << "Round: " << ctx.superstep << "\n";
  out << "Total Nodes: " << ctx.graph.node_count() << "\n";
  if (auto w = ctx.graph.node_weight(ctx.id)) {
    out << "Node Weight: " << FormatNumber(*w) << "\n";
  }
  if (!program.params.empty()) {
    out << "Parameters:\n";
    RenderNumbered(out, program.params);
  }
  if (!ctx.globals.empty()) {
    out << "Global Information:\n";
    RenderNumbered(out, ctx.globals);
  }
  if (request.phase != Phase::kInit) {
    out << "State:\n";
    RenderNumbered(out, request.state);
  }
  out << "Neighbor Information:\nConnected to:\n";
  auto targets = ctx.targets();
  if (targets.empty()) out << "(no neighbors)\n";
  for (const auto& n : targets) {
    out << "Node " << n.id;
    if (n.weight) out << " (edge weight: " << FormatNumber(*n.weight) << ")";
    out << "\n";
  }
  if (request.phase == Phase::kInit) {
    out << "In-degree: " << ctx.graph.in_degree(ctx.id)
        << "\nDegree: " << ctx.graph.degree(ctx.id) << "\n";
  }
  if (request.phase == Phase::kUpdate) {
    out << "Received Messages:\n";
    if (request.inbox.empty()) out << "(none)\n";
    std::size_t k = 0;
    for (const auto& m : request.inbox) {
      out << "Message " << ++k << " (from Node " << m.sender << "):\n";
      RenderNumbered(out, m.payload);
    }
  }
  out << "## Required Output\n"
      << "Explain your steps under \"## Process\", then give the result under "
         "\"## Output\" exactly in this layout:\n";
  if (request.phase == Phase::kSend) {
    out << "Message sent to Node <neighbor id>:\n";
    RenderPlaceholders(out, program.message_schema);
    out << "(one block per message; write \"No messages.\" if nothing is sent)\n";
  } else {
    out << "State:\n";
    RenderPlaceholders(out, program.state_schema);
  }
  prompt.user = out.str();
  return prompt;
}

std::string RenderRetryPrompt(const PhaseRequest& request,
                              std::string_view previous_reply,
                              std::string_view problem) {
  std::ostringstream out;
  out << "Your previous reply could not be used: " << problem << "\n"
      << "Previous reply:\n" << previous_reply << "\n"
      << "Answer again. The \"## Output\" block must list exactly these "
         "fields:\n";
  const Schema& schema = request.phase == Phase::kSend
                             ? request.program.message_schema
                             : request.program.state_schema;
  RenderPlaceholders(out, schema);
  out << "\n" << RenderPhasePrompt(request).user;
  return out.str();
}

FieldMap ParseFieldLines(std::string_view text, const Schema& schema) {
  static const std::regex kLine(
      R"(^\s*(?:[-*]\s*)?(?:\d+\.\s*)?`?([A-Za-z_][A-Za-z0-9_]*)`?\s*[:=]\s*(.*?)\s*$)");
  std::map<std::string, Value> found;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) {
      Fail("unrecognized line \"" + Trim(line) + "\"");
    }
    std::string name = m[1].str();
    const FieldSpec* spec = FindField(schema, name);
    if (spec == nullptr) Fail("unknown field `" + name + "`");
    if (found.contains(name)) Fail("field `" + name + "` given twice");
    auto value = ParseValue(m[2].str(), *spec);
    if (!value) {
      Fail("`" + name + "` = \"" + m[2].str() + "\" is not a valid " +
           std::string(ValueKindName(spec->kind)));
    }
    found.emplace(name, std::move(*value));
  }
  FieldMap fields;
  for (const auto& spec : schema) {
    auto it = found.find(spec.name);
    if (it == found.end()) Fail("missing field `" + spec.name + "`");
    fields.set(spec.name, std::move(it->second));
  }
  return fields;
}

PhaseResult ParsePhaseReply(const PhaseRequest& request, std::string_view reply) {
  auto block = OutputBlock(reply);
  if (!block) {
    if (auto json = FencedJson(reply)) return ParseJsonReply(request, *json);
    Fail("reply has no \"## Output\" block");
  }

  PhaseResult result{request.state, {}};
  if (request.phase != Phase::kSend) {
    std::string body = *block;
    static const std::regex kStateHeader(R"(^\s*State\s*:\s*$)",
                                         std::regex::icase | std::regex::multiline);
    std::smatch m;
    if (std::regex_search(body, m, kStateHeader)) {
      body = body.substr(m.position(0) + m.length(0));
    }
    result.state = ParseFieldLines(body, request.program.state_schema);
    return result;
  }

  static const std::regex kHeader(
      R"(^\s*Message\s+(?:sent\s+)?to\s+Node\s+(-?\d+)\s*:\s*$)",
      std::regex::icase | std::regex::multiline);
  const std::string& body = *block;
  std::vector<std::pair<NodeId, std::pair<std::size_t, std::size_t>>> spans;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), kHeader);
       it != std::sregex_iterator(); ++it) {
    if (!spans.empty()) spans.back().second.second = it->position(0);
    spans.push_back({std::stoll((*it)[1].str()),
                     {it->position(0) + it->length(0), body.size()}});
  }
  if (spans.empty()) {
    std::string lower = Lower(Trim(body));
    if (lower.rfind("no messages", 0) == 0 || lower.rfind("none", 0) == 0 ||
        lower.empty()) {
      return result;
    }
    Fail("send reply has no \"Message sent to Node <id>:\" blocks");
  }
  for (const auto& [to, range] : spans) {
    if (!IsTarget(request.ctx, to)) {
      Fail("node " + std::to_string(to) + " is not a neighbor of node " +
           std::to_string(request.ctx.id));
    }
    std::string_view part =
        std::string_view(body).substr(range.first, range.second - range.first);
    result.messages.push_back(
        {request.ctx.id, to, ParseFieldLines(part, request.program.message_schema)});
  }
  return result;
}

std::string RenderPhaseReply(const PhaseRequest& request, const PhaseResult& result) {
  std::ostringstream out;
  out << "## Process\nApplied the " << PhaseTitle(request.phase)
      << " rules of the algorithm.\n## Output\n";
  if (request.phase == Phase::kSend) {
    if (result.messages.empty()) out << "No messages.\n";
    for (const auto& m : result.messages) {
      out << "Message sent to Node " << m.recipient << ":\n";
      RenderNumbered(out, m.payload);
    }
  } else {
    out << "State:\n";
    RenderNumbered(out, result.state);
  }
  return out.str();
}

}  // namespace nodeagent
