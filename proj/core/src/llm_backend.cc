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

#include "nodeagent/llm_backend.h"

#include <cstdlib>
#include <utility>

#include "nodeagent/errors.h"
#include "nodeagent/prompt.h"

namespace nodeagent {

std::string_view BackendModeName(BackendMode mode) {
  switch (mode) {
    case BackendMode::kDeterministic: return "deterministic";
    case BackendMode::kLlm: return "llm";
    case BackendMode::kReplay: return "replay";
  }
  return "unknown";
}

std::optional<BackendMode> ParseBackendMode(std::string_view name) {
  if (name == "deterministic") return BackendMode::kDeterministic;
  if (name == "llm") return BackendMode::kLlm;
  if (name == "replay") return BackendMode::kReplay;
  return std::nullopt;
}

LlmBackend::LlmBackend(BackendOptions options,
                       std::unique_ptr<ChatTransport> transport)
    : options_(std::move(options)), transport_(std::move(transport)) {
  if (options_.max_retries < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
  }
  if (options_.concurrency == 0) options_.concurrency = 1;
  switch (options_.mode) {
    case BackendMode::kDeterministic:
      throw Error(ErrorCode::kInvalidArgument,
                  "use DeterministicBackend for deterministic mode");
    case BackendMode::kLlm:
      if (!transport_) {
        if (options_.endpoint.empty()) {
          throw Error(ErrorCode::kInvalidArgument, "LLM mode requires an endpoint");
        }
        const char* key = std::getenv(options_.credential_env.c_str());
        if (key == nullptr || *key == '\0') {
          throw Error(ErrorCode::kInvalidArgument,
                      "LLM mode requires a credential in $" + options_.credential_env);
        }
        transport_ = std::make_unique<HttpChatTransport>(options_.endpoint, key);
      }
      break;
    case BackendMode::kReplay:
      if (!options_.transcript_dir) {
        throw Error(ErrorCode::kInvalidArgument, "Replay mode requires a transcript store");
      }
      if (!std::filesystem::is_directory(*options_.transcript_dir)) {
        throw Error(ErrorCode::kStoreCorrupt,
                    "no transcript store at " + options_.transcript_dir->string());
      }
      transport_.reset();
      break;
  }
  if (options_.transcript_dir) store_.emplace(*options_.transcript_dir);
}

void LlmBackend::BeginRun(std::string_view run_key) { run_key_ = std::string(run_key); }

std::string LlmBackend::Obtain(const ExchangeKey& key, const ChatRequest& request) {
  const std::string& prompt = request.messages.back().content;
  if (options_.mode == BackendMode::kReplay) {
    auto record = store_->Get(key);
    if (!record) {
      throw Error(ErrorCode::kReplayMiss, "no recorded exchange " + key.ToString());
    }
    if (!record->prompt.empty() && record->prompt != prompt) {
      throw Error(ErrorCode::kReplayMiss,
                  "prompt diverged from the recording at " + key.ToString());
    }
    return record->reply;
  }
  std::string reply;
  std::exception_ptr last;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    try {
      {
        std::lock_guard<std::mutex> lock(mu_);
        ++endpoint_calls_;
      }
      reply = transport_->Complete(request);
      last = nullptr;
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEndpointError) throw;
      last = std::current_exception();
    } catch (const std::exception& e) {
      last = std::make_exception_ptr(Error(ErrorCode::kEndpointError, e.what()));
    }
  }
  if (last) std::rethrow_exception(last);
  if (store_) {
    store_->Put({key, request.messages.front().content, prompt, reply});
  }
  return reply;
}

PhaseResult LlmBackend::ExecutePhase(const PhaseRequest& request) {
  PhasePrompt prompt = RenderPhasePrompt(request);
  ChatRequest chat{options_.model, options_.temperature,
                   {{"system", prompt.system}, {"user", prompt.user}}};
  std::string problem;
  std::string previous_reply;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    ExchangeKey key{run_key_, request.ctx.id, request.ctx.superstep,
                    request.phase, attempt};
    if (attempt > 0) {
      chat.messages.back().content =
          RenderRetryPrompt(request, previous_reply, problem);
    }
    std::string reply = Obtain(key, chat);
    AgentPromptExchange exchange{request.ctx.id, request.phase,
                                 request.ctx.superstep, chat.messages.back().content,
                                 reply, {}, attempt, false, {}};
    try {
      exchange.parsed = ParsePhaseReply(request, reply);
      {
        std::lock_guard<std::mutex> lock(mu_);
        exchanges_.push_back(exchange);
      }
      return exchange.parsed;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParseFailure) throw;
      exchange.failed = true;
      exchange.failure = e.detail();
      problem = e.detail();
      previous_reply = reply;
      std::lock_guard<std::mutex> lock(mu_);
      exchanges_.push_back(exchange);
    }
  }
  throw Error(ErrorCode::kParseFailure,
              "node " + std::to_string(request.ctx.id) + " " +
                  std::string(PhaseName(request.phase)) + " after " +
                  std::to_string(options_.max_retries + 1) + " attempts: " + problem);
}

std::vector<AgentPromptExchange> LlmBackend::exchanges() const {
  std::lock_guard<std::mutex> lock(mu_);
  return exchanges_;
}

std::size_t LlmBackend::endpoint_calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return endpoint_calls_;
}

std::unique_ptr<AgentBackend> MakeBackend(const BackendOptions& options) {
  if (options.mode == BackendMode::kDeterministic) {
    return std::make_unique<DeterministicBackend>();
  }
  return std::make_unique<LlmBackend>(options, nullptr);
}

}  // namespace nodeagent
