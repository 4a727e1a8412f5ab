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

#ifndef NODEAGENT_CHAT_TRANSPORT_H_
#define NODEAGENT_CHAT_TRANSPORT_H_

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace nodeagent {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  double temperature = 0;
  std::vector<ChatMessage> messages;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  // Returns the text of the first choice. Throws EndpointError.
  virtual std::string Complete(const ChatRequest& request) = 0;
};

// {"model": ..., "temperature": ..., "messages": [{"role", "content"}...]}
std::string BuildChatRequestBody(const ChatRequest& request);
// choices[0].message.content of a chat-completion response.
// Throws EndpointError.
std::string ExtractCompletionText(std::string_view response_body);

// POSTs to {endpoint}/chat/completions with a bearer credential.
class HttpChatTransport final : public ChatTransport {
 public:
  HttpChatTransport(std::string endpoint, std::string api_key,
                    std::chrono::seconds timeout = std::chrono::seconds(120));

  std::string Complete(const ChatRequest& request) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;  // path prefix + /chat/completions
  std::string api_key_;
  std::chrono::seconds timeout_;
};

}  // namespace nodeagent

#endif  // NODEAGENT_CHAT_TRANSPORT_H_
