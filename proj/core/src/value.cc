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

#include "nodeagent/value.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "nodeagent/errors.h"

namespace nodeagent {

std::string_view ValueKindName(ValueKind kind) {
  switch (kind) {
    case ValueKind::kBoolean: return "boolean";
    case ValueKind::kInteger: return "integer";
    case ValueKind::kNumber: return "number";
    case ValueKind::kNode: return "node-id";
    case ValueKind::kNodeList: return "node-id list";
    case ValueKind::kNodeWeights: return "(node-id, number) list";
    case ValueKind::kText: return "text";
  }
  return "unknown";
}

bool ValueConforms(const Value& value, const FieldSpec& spec) {
  if (std::holds_alternative<std::monostate>(value)) return spec.nullable;
  if (std::holds_alternative<Infinity>(value)) return spec.allows_infinity;
  switch (spec.kind) {
    case ValueKind::kBoolean: return std::holds_alternative<bool>(value);
    case ValueKind::kInteger: return std::holds_alternative<std::int64_t>(value);
    case ValueKind::kNumber: {
      const double* d = std::get_if<double>(&value);
      return d != nullptr && std::isfinite(*d);
    }
    case ValueKind::kNode: return std::holds_alternative<NodeRef>(value);
    case ValueKind::kNodeList: return std::holds_alternative<NodeList>(value);
    case ValueKind::kNodeWeights: {
      const auto* w = std::get_if<NodeWeights>(&value);
      return w != nullptr &&
             std::all_of(w->begin(), w->end(),
                         [](const auto& p) { return std::isfinite(p.second); });
    }
    case ValueKind::kText: return std::holds_alternative<std::string>(value);
  }
  return false;
}

FieldMap::FieldMap(std::initializer_list<std::pair<std::string, Value>> fields) {
  for (const auto& [name, value] : fields) set(name, value);
}

bool FieldMap::has(std::string_view name) const {
  return std::any_of(fields_.begin(), fields_.end(),
                     [&](const auto& f) { return f.first == name; });
}

const Value& FieldMap::at(std::string_view name) const {
  for (const auto& f : fields_) {
    if (f.first == name) return f.second;
  }
  throw Error(ErrorCode::kSchemaViolation,
              "missing field `" + std::string(name) + "`");
}

void FieldMap::set(std::string_view name, Value value) {
  for (auto& f : fields_) {
    if (f.first == name) {
      f.second = std::move(value);
      return;
    }
  }
  fields_.emplace_back(std::string(name), std::move(value));
}

void FieldMap::throw_kind_mismatch(std::string_view name) {
  throw Error(ErrorCode::kSchemaViolation,
              "field `" + std::string(name) + "` holds a different kind");
}

std::string CheckSchema(const Schema& schema, const FieldMap& fields) {
  if (fields.size() != schema.size()) {
    return "expected " + std::to_string(schema.size()) + " fields, got " +
           std::to_string(fields.size());
  }
  for (const auto& spec : schema) {
    if (!fields.has(spec.name)) return "missing field `" + spec.name + "`";
    if (!ValueConforms(fields.at(spec.name), spec)) {
      return "field `" + spec.name + "` is not a valid " +
             std::string(ValueKindName(spec.kind)) + ": " +
             RenderValue(fields.at(spec.name));
    }
  }
  return {};
}

bool ApproxEqual(const Value& a, const Value& b, double tolerance) {
  if (a.index() != b.index()) return false;
  if (const double* x = std::get_if<double>(&a)) {
    return std::fabs(*x - std::get<double>(b)) <= tolerance;
  }
  if (const auto* x = std::get_if<NodeWeights>(&a)) {
    const auto& y = std::get<NodeWeights>(b);
    if (x->size() != y.size()) return false;
    for (std::size_t i = 0; i < x->size(); ++i) {
      if ((*x)[i].first != y[i].first ||
          std::fabs((*x)[i].second - y[i].second) > tolerance) {
        return false;
      }
    }
    return true;
  }
  return a == b;
}

bool ApproxEqual(const FieldMap& a, const FieldMap& b, double tolerance) {
  if (a.size() != b.size()) return false;
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !ApproxEqual(ia->second, ib->second, tolerance)) {
      return false;
    }
  }
  return true;
}

namespace {

std::string FormatReal(double v) {
  if (std::nearbyint(v) == v && std::fabs(v) < 1e15) return FormatNumber(v);
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct Renderer {
  std::string operator()(std::monostate) const { return "unset"; }
  std::string operator()(bool b) const { return b ? "True" : "False"; }
  std::string operator()(std::int64_t i) const { return std::to_string(i); }
  std::string operator()(double d) const { return FormatReal(d); }
  std::string operator()(NodeRef n) const { return std::to_string(n.id); }
  std::string operator()(const NodeList& l) const {
    std::string out = "[";
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(l[i]);
    }
    return out + "]";
  }
  std::string operator()(const NodeWeights& w) const {
    std::string out = "[";
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ", ";
      out += "(" + std::to_string(w[i].first) + ", " + FormatReal(w[i].second) + ")";
    }
    return out + "]";
  }
  std::string operator()(const std::string& s) const { return s; }
  std::string operator()(Infinity) const { return "\\infinity"; }
};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::optional<std::int64_t> ToInt(std::string_view s) {
  s = Trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<double> ToReal(std::string_view s) {
  s = Trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() ||
      !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<NodeId> ToNode(std::string_view s) {
  s = Trim(s);
  std::string lower = Lower(s);
  if (lower.rfind("node", 0) == 0) s = Trim(s.substr(4));
  return ToInt(s);
}

// Splits "[a, b, c]" into its top-level items; parentheses nest.
std::optional<std::vector<std::string_view>> SplitList(std::string_view s) {
  s = Trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  s = Trim(s.substr(1, s.size() - 2));
  std::vector<std::string_view> items;
  if (s.empty()) return items;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      items.push_back(Trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  items.push_back(Trim(s.substr(start)));
  return items;
}

bool IsInfinityToken(std::string_view s) {
  std::string lower = Lower(Trim(s));
  return lower == "\\infinity" || lower == "infinity" || lower == "inf" ||
         lower == "+inf" || lower == "\\infty" || lower == "∞";
}

}  // namespace

std::string RenderValue(const Value& value) { return std::visit(Renderer{}, value); }

std::optional<Value> ParseValue(std::string_view text, const FieldSpec& spec) {
  std::string_view s = Trim(text);
  if (!s.empty() && s.back() == '.' && spec.kind != ValueKind::kText) {
    s = Trim(s.substr(0, s.size() - 1));
  }
  while (s.size() >= 2 && s.front() == '`' && s.back() == '`') {
    s = Trim(s.substr(1, s.size() - 2));
  }
  std::string lower = Lower(s);
  if (spec.nullable &&
      (lower == "unset" || lower == "none" || lower == "null")) {
    return Value{std::monostate{}};
  }
  if (spec.allows_infinity && IsInfinityToken(s)) return Value{Infinity{}};

  switch (spec.kind) {
    case ValueKind::kBoolean:
      if (lower == "true" || lower == "yes") return Value{true};
      if (lower == "false" || lower == "no") return Value{false};
      return std::nullopt;
    case ValueKind::kInteger:
      if (auto v = ToInt(s)) return Value{*v};
      return std::nullopt;
    case ValueKind::kNumber:
      if (auto v = ToReal(s)) return Value{*v};
      return std::nullopt;
    case ValueKind::kNode:
      if (auto v = ToNode(s)) return Value{NodeRef{*v}};
      return std::nullopt;
    case ValueKind::kNodeList: {
      auto items = SplitList(s);
      if (!items) return std::nullopt;
      NodeList out;
      for (auto item : *items) {
        auto v = ToNode(item);
        if (!v) return std::nullopt;
        out.push_back(*v);
      }
      return Value{std::move(out)};
    }
    case ValueKind::kNodeWeights: {
      auto items = SplitList(s);
      if (!items) return std::nullopt;
      NodeWeights out;
      for (auto item : *items) {
        if (item.size() < 2 || item.front() != '(' || item.back() != ')') {
          return std::nullopt;
        }
        auto body = item.substr(1, item.size() - 2);
        auto comma = body.find(',');
        if (comma == std::string_view::npos) return std::nullopt;
        auto id = ToNode(body.substr(0, comma));
        auto w = ToReal(body.substr(comma + 1));
        if (!id || !w) return std::nullopt;
        out.emplace_back(*id, *w);
      }
      return Value{std::move(out)};
    }
    case ValueKind::kText:
      return Value{std::string(s)};
  }
  return std::nullopt;
}

std::optional<double> AsNumber(const Value& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    return static_cast<double>(*i);
  }
  if (const auto* d = std::get_if<double>(&value)) return *d;
  if (std::holds_alternative<Infinity>(value)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::nullopt;
}

Value AddDistance(const Value& distance, double weight) {
  if (std::holds_alternative<Infinity>(distance)) return Infinity{};
  auto d = AsNumber(distance);
  if (!d) {
    throw Error(ErrorCode::kSchemaViolation, "distance is not numeric");
  }
  return *d + weight;
}

bool DistanceLess(const Value& a, const Value& b) {
  auto x = AsNumber(a);
  auto y = AsNumber(b);
  if (!x || !y) throw Error(ErrorCode::kSchemaViolation, "distance is not numeric");
  return *x < *y;
}

}  // namespace nodeagent
