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

#ifndef NODEAGENT_LLM_BACKEND_H_
#define NODEAGENT_LLM_BACKEND_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nodeagent/backend.h"
#include "nodeagent/chat_transport.h"
#include "nodeagent/transcript_store.h"

namespace nodeagent {

enum class BackendMode { kDeterministic, kLlm, kReplay };

std::string_view BackendModeName(BackendMode mode);
std::optional<BackendMode> ParseBackendMode(std::string_view name);

struct BackendOptions {
  BackendMode mode = BackendMode::kDeterministic;
  std::string endpoint;
  std::string model;
  double temperature = 0;
  int max_retries = 2;
  // Name of the environment variable holding the bearer credential.
  std::string credential_env = "OPENAI_API_KEY";
  // LLM mode records here when set; Replay mode requires it.
  std::optional<std::filesystem::path> transcript_dir;
  // Concurrent endpoint calls per superstep.
  std::size_t concurrency = 4;
};

// One prompt/reply round trip of one agent phase.
struct AgentPromptExchange {
  NodeId node_id = 0;
  Phase phase = Phase::kInit;
  std::size_t round = 0;
  std::string prompt;
  std::string reply;
  PhaseResult parsed;
  int attempt = 0;
  bool failed = false;
  std::string failure;
};

// Executes phases by prompting a chat model (LLM mode) or by serving a
// recorded transcript (Replay mode). Unparseable replies are retried up to
// max_retries times with a correction prompt, then raise ParseFailure.
class LlmBackend final : public AgentBackend {
 public:
  // `transport` may be null in Replay mode. In LLM mode a null transport
  // means "build an HttpChatTransport from options".
  LlmBackend(BackendOptions options, std::unique_ptr<ChatTransport> transport);

  PhaseResult ExecutePhase(const PhaseRequest& request) override;
  void BeginRun(std::string_view run_key) override;
  std::size_t max_concurrency() const override { return options_.concurrency; }
  std::string_view mode_name() const override { return BackendModeName(options_.mode); }

  std::vector<AgentPromptExchange> exchanges() const;
  std::size_t endpoint_calls() const;

 private:
  std::string Obtain(const ExchangeKey& key, const ChatRequest& request);

  BackendOptions options_;
  std::unique_ptr<ChatTransport> transport_;
  std::optional<TranscriptStore> store_;
  std::string run_key_;

  mutable std::mutex mu_;
  std::vector<AgentPromptExchange> exchanges_;
  std::size_t endpoint_calls_ = 0;
};

// Builds the backend selected by options.mode.
std::unique_ptr<AgentBackend> MakeBackend(const BackendOptions& options);

}  // namespace nodeagent

#endif  // NODEAGENT_LLM_BACKEND_H_
