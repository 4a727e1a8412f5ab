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

#include <regex>
#include <sstream>

#include "nodeagent/vertex_program.h"

namespace nodeagent {

namespace {

void RenderFields(std::ostringstream& out, const Schema& schema,
                  const std::vector<std::string>& docs) {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    out << i + 1 << ". `" << schema[i].name << "`: ";
    if (i < docs.size()) {
      out << docs[i];
    } else {
      out << ValueKindName(schema[i].kind);
    }
    out << "\n";
  }
}

void RenderSteps(std::ostringstream& out, const std::vector<std::string>& steps) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    out << "Step " << i + 1 << ": " << steps[i] << "\n";
  }
}

}  // namespace

std::string RenderTemplate(const TemplateDocument& doc, const Schema& state,
                           const Schema& message) {
  std::ostringstream out;
  if (!doc.title.empty()) out << "## " << doc.title << "\n";
  if (!doc.summary.empty()) out << doc.summary << "\n";
  out << "### State\n";
  RenderFields(out, state, doc.state_docs);
  out << "### Message\n";
  RenderFields(out, message, doc.message_docs);
  out << "### Initialization\n";
  RenderSteps(out, doc.initialization);
  out << "### Send\n";
  RenderSteps(out, doc.send);
  out << "### Update\n";
  RenderSteps(out, doc.update);
  out << "### Termination\n";
  out << "The algorithm continues until:\n";
  for (const auto& t : doc.termination) out << "- " << t << "\n";
  return out.str();
}

std::string RenderTemplate(const VertexProgram& program) {
  return RenderTemplate(program.doc, program.state_schema,
                        program.message_schema);
}

bool TemplateSections::complete() const {
  return !state.empty() && !message.empty() && !initialization.empty() &&
         !send.empty() && !update.empty() && !termination.empty();
}

TemplateSections ParseTemplateSections(std::string_view text) {
  static const std::regex kHeading(
      R"(^\s*#{2,4}\s*(State|Message|Initialization|Send|Update|Termination)\s*$)",
      std::regex::icase);
  TemplateSections sections;
  std::string* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (std::regex_match(line, m, kHeading)) {
      std::string name = m[1].str();
      for (auto& c : name) c = static_cast<char>(std::tolower(c));
      if (name == "state") current = &sections.state;
      if (name == "message") current = &sections.message;
      if (name == "initialization") current = &sections.initialization;
      if (name == "send") current = &sections.send;
      if (name == "update") current = &sections.update;
      if (name == "termination") current = &sections.termination;
      continue;
    }
    if (current != nullptr) *current += line + "\n";
  }
  return sections;
}

}  // namespace nodeagent
