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

#ifndef NODEAGENT_VALUE_H_
#define NODEAGENT_VALUE_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nodeagent/graph.h"

namespace nodeagent {

// Distance that no path has reached yet. Rendered as "\infinity".
struct Infinity {
  friend bool operator==(Infinity, Infinity) { return true; }
};

// A node id stored in a state or message field.
struct NodeRef {
  NodeId id = 0;
  friend bool operator==(NodeRef, NodeRef) = default;
};

using NodeList = std::vector<NodeId>;
using NodeWeights = std::vector<std::pair<NodeId, double>>;

// std::monostate marks an unset nullable field.
using Value = std::variant<std::monostate, bool, std::int64_t, double, NodeRef,
                           NodeList, NodeWeights, std::string, Infinity>;

enum class ValueKind {
  kBoolean,
  kInteger,
  kNumber,
  kNode,
  kNodeList,
  kNodeWeights,
  kText,
};

std::string_view ValueKindName(ValueKind kind);

struct FieldSpec {
  std::string name;
  ValueKind kind = ValueKind::kInteger;
  bool nullable = false;          // may hold std::monostate
  bool allows_infinity = false;   // numeric field that may hold Infinity
};

using Schema = std::vector<FieldSpec>;

bool ValueConforms(const Value& value, const FieldSpec& spec);

// Ordered name -> value map. Field order is the schema order, which is also
// the order fields are rendered in prompts and traces.
class FieldMap {
 public:
  FieldMap() = default;
  FieldMap(std::initializer_list<std::pair<std::string, Value>> fields);

  bool has(std::string_view name) const;
  const Value& at(std::string_view name) const;  // throws SchemaViolation
  void set(std::string_view name, Value value);

  template <typename T>
  const T& get(std::string_view name) const {
    const Value& v = at(name);
    if (const T* p = std::get_if<T>(&v)) return *p;
    throw_kind_mismatch(name);
  }

  bool is_unset(std::string_view name) const {
    return std::holds_alternative<std::monostate>(at(name));
  }

  std::size_t size() const { return fields_.size(); }
  bool empty() const { return fields_.empty(); }
  auto begin() const { return fields_.begin(); }
  auto end() const { return fields_.end(); }

  friend bool operator==(const FieldMap&, const FieldMap&) = default;

 private:
  [[noreturn]] static void throw_kind_mismatch(std::string_view name);

  std::vector<std::pair<std::string, Value>> fields_;
};

using VertexState = FieldMap;

// Returns an empty string when `fields` matches `schema` exactly (same
// field set, kinds conform), otherwise a description of the mismatch.
std::string CheckSchema(const Schema& schema, const FieldMap& fields);

// Structural equality with absolute tolerance on floating fields.
bool ApproxEqual(const Value& a, const Value& b, double tolerance);
bool ApproxEqual(const FieldMap& a, const FieldMap& b, double tolerance);

// Text forms used in prompts, traces and agent replies.
std::string RenderValue(const Value& value);
// Parses the textual form of a value of the given field. Returns nullopt
// when the text is not a valid value of that kind.
std::optional<Value> ParseValue(std::string_view text, const FieldSpec& spec);

// Numeric view of integer/number/infinity values.
std::optional<double> AsNumber(const Value& value);

// Distance arithmetic saturating at Infinity.
Value AddDistance(const Value& distance, double weight);
// True when a < b under the order finite < Infinity.
bool DistanceLess(const Value& a, const Value& b);

}  // namespace nodeagent

#endif  // NODEAGENT_VALUE_H_
