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

#include "nodeagent/chat_transport.h"

#include <regex>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "nodeagent/errors.h"

namespace nodeagent {

std::string BuildChatRequestBody(const ChatRequest& request) {
  nlohmann::json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : request.messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  return body.dump();
}

std::string ExtractCompletionText(std::string_view response_body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(response_body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kEndpointError,
                std::string("response is not JSON: ") + e.what());
  }
  if (doc.contains("error")) {
    throw Error(ErrorCode::kEndpointError, "endpoint error: " + doc["error"].dump());
  }
  const auto& choices = doc.value("choices", nlohmann::json::array());
  if (!choices.is_array() || choices.empty()) {
    throw Error(ErrorCode::kEndpointError, "response has no choices");
  }
  const auto& message = choices[0].value("message", nlohmann::json::object());
  if (!message.contains("content") || !message["content"].is_string()) {
    throw Error(ErrorCode::kEndpointError, "first choice has no text content");
  }
  return message["content"].get<std::string>();
}

HttpChatTransport::HttpChatTransport(std::string endpoint, std::string api_key,
                                     std::chrono::seconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(endpoint, m, kUrl)) {
    throw Error(ErrorCode::kEndpointError, "malformed endpoint URL " + endpoint);
  }
  base_ = m[1].str();
  std::string prefix = m[2].matched ? m[2].str() : "";
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/chat/completions";
}

std::string HttpChatTransport::Complete(const ChatRequest& request) {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  auto res = client.Post(path_, headers, BuildChatRequestBody(request),
                         "application/json");
  if (!res) {
    throw Error(ErrorCode::kEndpointError,
                "request to " + base_ + path_ + " failed: " +
                    httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::kEndpointError,
                "HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  return ExtractCompletionText(res->body);
}

}  // namespace nodeagent
