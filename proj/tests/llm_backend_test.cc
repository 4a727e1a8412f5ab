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

#include <gtest/gtest.h>

#include <unistd.h>

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "nodeagent/engine.h"
#include "nodeagent/errors.h"
#include "nodeagent/programs.h"
#include "nodeagent/transcript_store.h"
#include "test_support.h"

namespace nodeagent {
namespace {

namespace fs = std::filesystem;
using testing::QueueTransport;
using testing::ReadData;
using testing::ScriptedTransport;
using testing::ScriptingBackend;

std::optional<ErrorCode> CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

fs::path FreshDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() /
                 ("nodeagent_" + std::string(info->test_suite_name()) + "_" +
                  info->name() + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

class FlakyTransport final : public ChatTransport {
 public:
  FlakyTransport(int failures, std::string reply)
      : failures_(failures), reply_(std::move(reply)) {}
  std::string Complete(const ChatRequest&) override {
    ++calls_;
    if (failures_-- > 0) throw Error(ErrorCode::kEndpointError, "HTTP 503");
    return reply_;
  }
  int calls() const { return calls_; }

 private:
  int failures_;
  std::string reply_;
  int calls_ = 0;
};

class GoldenShortestPath : public ::testing::Test {
 protected:
  void SetUp() override {
    graph_.emplace(ParseGraph(ReadData("golden_shortest_path.txt"), false, true));
    program_.emplace(ShortestPathProgram(*graph_, 1));
    DeterministicBackend deterministic;
    expected_ = nodeagent::Run(*graph_, *program_, deterministic);
    nodeagent::Run(*graph_, *program_, scripting_);
  }

  BackendOptions LlmOptions() const {
    BackendOptions o;
    o.mode = BackendMode::kLlm;
    o.model = "scripted";
    return o;
  }

  std::optional<Graph> graph_;
  std::optional<VertexProgram> program_;
  RunResult expected_;
  ScriptingBackend scripting_;
};

TEST_F(GoldenShortestPath, RuleFollowingAgentsMatchDeterministicRun) {
  auto transport = std::make_unique<ScriptedTransport>(scripting_.script());
  ScriptedTransport* raw = transport.get();
  LlmBackend backend(LlmOptions(), std::move(transport));
  EngineConfig config;
  config.workers = 4;
  RunResult r = nodeagent::Run(*graph_, *program_, backend, config);
  EXPECT_EQ(r.final_states, expected_.final_states);
  EXPECT_EQ(r.supersteps_executed, expected_.supersteps_executed);
  EXPECT_EQ(r.termination, expected_.termination);
  EXPECT_EQ(raw->calls(), backend.endpoint_calls());
  EXPECT_EQ(backend.exchanges().size(), backend.endpoint_calls());
  EXPECT_EQ(backend.mode_name(), "llm");
}

TEST_F(GoldenShortestPath, RecordThenReplayIsBitExactWithoutEndpoint) {
  fs::path dir = FreshDir();
  BackendOptions record = LlmOptions();
  record.transcript_dir = dir;
  LlmBackend recorder(record, std::make_unique<ScriptedTransport>(scripting_.script()));
  RunResult recorded = nodeagent::Run(*graph_, *program_, recorder);
  EXPECT_EQ(TranscriptStore(dir).size(), recorder.endpoint_calls());

  BackendOptions replay;
  replay.mode = BackendMode::kReplay;
  replay.transcript_dir = dir;
  LlmBackend replayer(replay, nullptr);
  RunResult replayed = nodeagent::Run(*graph_, *program_, replayer);
  EXPECT_EQ(replayer.endpoint_calls(), 0u);
  EXPECT_EQ(replayed.final_states, recorded.final_states);
  EXPECT_EQ(replayed.final_states, expected_.final_states);
  EXPECT_EQ(replayed.supersteps_executed, recorded.supersteps_executed);
  EXPECT_EQ(replayed.termination, recorded.termination);
  EXPECT_EQ(replayed.messages_sent, recorded.messages_sent);

  Graph mutated = ParseGraph("The graph has 3 nodes: (0,1,4) (1,2,2)", false, true);
  VertexProgram other = ShortestPathProgram(mutated, 1);
  EXPECT_EQ(CodeOf([&] { nodeagent::Run(mutated, other, replayer); }),
            ErrorCode::kReplayMiss);
  fs::remove_all(dir);
}

TEST_F(GoldenShortestPath, ReplayDetectsPromptDivergence) {
  fs::path dir = FreshDir();
  TranscriptStore store(dir);
  ExchangeKey key{ProblemKey(*graph_, *program_), 0, 0, Phase::kInit, 0};
  store.Put({key, "", "a prompt nobody rendered", "## Output\nState:\n1. distance: 0\n"});
  BackendOptions replay;
  replay.mode = BackendMode::kReplay;
  replay.transcript_dir = dir;
  LlmBackend replayer(replay, nullptr);
  EXPECT_EQ(CodeOf([&] { nodeagent::Run(*graph_, *program_, replayer); }),
            ErrorCode::kReplayMiss);
  fs::remove_all(dir);
}

class SinglePhase : public ::testing::Test {
 protected:
  Graph graph_ = ParseGraph("The graph has 3 nodes: (0,1,4) (1,2,2)", false, true);
  VertexProgram program_ = ShortestPathProgram(graph_, 0);
  FieldMap globals_;
  NodeContext ctx_{graph_, 1, 1, program_.params, globals_};
  VertexState state_{{"distance", Value{Infinity{}}}};
  std::vector<MessageEnvelope> inbox_{{0, 1, {{"new_distance", 4.0}}}};
  PhaseRequest request_{program_, ctx_, Phase::kUpdate, state_, inbox_};
};

TEST_F(SinglePhase, RetriesWithCorrectivePrompt) {
  auto transport = std::make_unique<QueueTransport>(std::vector<std::string>{
      "The distance should be four.", "## Output\nState:\n1. distance: 4\n"});
  QueueTransport* raw = transport.get();
  BackendOptions o;
  o.mode = BackendMode::kLlm;
  LlmBackend backend(o, std::move(transport));
  PhaseResult r = backend.ExecutePhase(request_);
  EXPECT_EQ(r.state.get<double>("distance"), 4.0);
  ASSERT_EQ(raw->requests().size(), 2u);
  EXPECT_NE(raw->requests()[1].messages.back().content.find("could not be used"),
            std::string::npos);
  auto exchanges = backend.exchanges();
  ASSERT_EQ(exchanges.size(), 2u);
  EXPECT_TRUE(exchanges[0].failed);
  EXPECT_FALSE(exchanges[1].failed);
  EXPECT_EQ(exchanges[1].attempt, 1);
}

TEST_F(SinglePhase, AbortsAfterRetryBudget) {
  auto transport = std::make_unique<QueueTransport>(std::vector<std::string>{"no idea"});
  QueueTransport* raw = transport.get();
  BackendOptions o;
  o.mode = BackendMode::kLlm;
  o.max_retries = 1;
  LlmBackend backend(o, std::move(transport));
  EXPECT_EQ(CodeOf([&] { backend.ExecutePhase(request_); }), ErrorCode::kParseFailure);
  EXPECT_EQ(raw->requests().size(), 2u);
}

TEST_F(SinglePhase, RetriesTransientEndpointErrors) {
  auto transport = std::make_unique<FlakyTransport>(2, "## Output\nState:\n1. distance: 4\n");
  FlakyTransport* raw = transport.get();
  BackendOptions o;
  o.mode = BackendMode::kLlm;
  o.max_retries = 2;
  LlmBackend backend(o, std::move(transport));
  EXPECT_EQ(backend.ExecutePhase(request_).state.get<double>("distance"), 4.0);
  EXPECT_EQ(raw->calls(), 3);

  BackendOptions strict = o;
  strict.max_retries = 0;
  LlmBackend failing(strict, std::make_unique<FlakyTransport>(5, ""));
  EXPECT_EQ(CodeOf([&] { failing.ExecutePhase(request_); }), ErrorCode::kEndpointError);
}

TEST(TranscriptStoreTest, RoundTripsAndDetectsCorruption) {
  fs::path dir = FreshDir();
  TranscriptStore store(dir);
  ExchangeKey key{"problem", 3, 2, Phase::kSend, 1};
  EXPECT_FALSE(store.Get(key).has_value());
  store.Put({key, "sys", "prompt", "reply"});
  auto got = store.Get(key);
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->reply, "reply");
  EXPECT_EQ(got->key.ToString(), key.ToString());
  EXPECT_EQ(store.size(), 1u);

  { std::ofstream(store.PathFor(key)) << "{not json"; }
  EXPECT_EQ(CodeOf([&] { store.Get(key); }), ErrorCode::kStoreCorrupt);

  ExchangeKey other{"problem", 4, 2, Phase::kSend, 1};
  store.Put({other, "", "", "x"});
  fs::copy_file(store.PathFor(other), store.PathFor(key),
                fs::copy_options::overwrite_existing);
  EXPECT_EQ(CodeOf([&] { store.Get(key); }), ErrorCode::kStoreCorrupt);
  fs::remove_all(dir);
}

std::string StateReply(bool visited, int path_length, int max_path_length) {
  return "## Output\nState:\n1. visited: " + std::string(visited ? "True" : "False") +
         "\n2. path_length: " + std::to_string(path_length) +
         "\n3. max_path_length: " + std::to_string(max_path_length) + "\n";
}

TEST(HandAuthoredTranscriptTest, ReproducesRecordedHamiltonStates) {
  Graph g = ParseGraph(ReadData("golden_hamilton.txt"), false, false);
  VertexProgram p = HamiltonHeuristicProgram(g);
  const std::map<NodeId, std::array<int, 2>> final_states{
      {0, {5, 1}}, {1, {2, 1}}, {2, {4, 3}}, {3, {5, 3}}, {4, {4, 3}}, {5, {5, 3}}};
  fs::path dir = FreshDir();
  TranscriptStore store(dir);
  const std::string problem = ProblemKey(g, p);
  const std::size_t rounds = g.node_count() + 1;
  for (NodeId v : g.node_ids()) {
    store.Put({{problem, v, 0, Phase::kInit, 0}, "", "",
               v == 0 ? StateReply(true, 1, 1) : StateReply(false, 0, 1)});
    const auto& [length, longest] = final_states.at(v);
    for (std::size_t r = 0; r <= rounds; ++r) {
      store.Put({{problem, v, r, Phase::kSend, 0}, "", "", "## Output\nNo messages.\n"});
      if (r > 0) {
        store.Put({{problem, v, r, Phase::kUpdate, 0}, "", "",
                   StateReply(true, length, longest)});
      }
    }
  }
  BackendOptions o;
  o.mode = BackendMode::kReplay;
  o.transcript_dir = dir;
  LlmBackend replayer(o, nullptr);
  RunResult r = nodeagent::Run(g, p, replayer);
  EXPECT_EQ(replayer.endpoint_calls(), 0u);
  EXPECT_EQ(r.termination, Termination::kConverged);
  for (const auto& [v, expected] : final_states) {
    const VertexState& s = r.final_states.at(v);
    EXPECT_TRUE(s.get<bool>("visited"));
    EXPECT_EQ(s.get<std::int64_t>("path_length"), expected[0]) << "node " << v;
    EXPECT_EQ(s.get<std::int64_t>("max_path_length"), expected[1]) << "node " << v;
  }
  fs::remove_all(dir);
}

TEST(ChatTransportTest, RequestBodyAndCompletionText) {
  ChatRequest request{"m1", 0.5, {{"system", "s"}, {"user", "u"}}};
  auto body = nlohmann::json::parse(BuildChatRequestBody(request));
  EXPECT_EQ(body["model"], "m1");
  EXPECT_EQ(body["temperature"], 0.5);
  EXPECT_EQ(body["messages"][1]["role"], "user");
  EXPECT_EQ(body["messages"][1]["content"], "u");
  EXPECT_EQ(ExtractCompletionText(
                R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})"),
            "hi");
  EXPECT_EQ(CodeOf([] { ExtractCompletionText(R"({"choices":[]})"); }),
            ErrorCode::kEndpointError);
  EXPECT_EQ(CodeOf([] { ExtractCompletionText(R"({"error":{"message":"quota"}})"); }),
            ErrorCode::kEndpointError);
  EXPECT_EQ(CodeOf([] { ExtractCompletionText("<html>"); }), ErrorCode::kEndpointError);
}

TEST(HttpChatTransportTest, TalksToLocalEndpoint) {
  httplib::Server server;
  std::string auth;
  std::string received;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    received = req.body;
    res.set_content(R"({"choices":[{"message":{"content":"## Output\nNo messages."}}]})",
                    "application/json");
  });
  server.Post("/down/chat/completions", [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
    res.set_content("overloaded", "text/plain");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string base = "http://127.0.0.1:" + std::to_string(port);
  HttpChatTransport transport(base + "/v1/", "secret-token");
  std::string text = transport.Complete({"m", 0, {{"user", "hello"}}});
  EXPECT_EQ(text, "## Output\nNo messages.");
  EXPECT_EQ(auth, "Bearer secret-token");
  EXPECT_EQ(nlohmann::json::parse(received)["messages"][0]["content"], "hello");

  HttpChatTransport down(base + "/down", "");
  EXPECT_EQ(CodeOf([&] { down.Complete({"m", 0, {{"user", "x"}}}); }),
            ErrorCode::kEndpointError);
  server.stop();
  thread.join();
  EXPECT_EQ(CodeOf([&] { down.Complete({"m", 0, {{"user", "x"}}}); }),
            ErrorCode::kEndpointError);
}

TEST(BackendConfigTest, ValidatesModes) {
  ::unsetenv("NODEAGENT_TEST_MISSING_KEY");
  BackendOptions llm;
  llm.mode = BackendMode::kLlm;
  llm.endpoint = "http://127.0.0.1:9";
  llm.credential_env = "NODEAGENT_TEST_MISSING_KEY";
  EXPECT_EQ(CodeOf([&] { LlmBackend(llm, nullptr); }), ErrorCode::kInvalidArgument);
  llm.endpoint.clear();
  EXPECT_EQ(CodeOf([&] { LlmBackend(llm, nullptr); }), ErrorCode::kInvalidArgument);

  BackendOptions replay;
  replay.mode = BackendMode::kReplay;
  EXPECT_EQ(CodeOf([&] { LlmBackend(replay, nullptr); }), ErrorCode::kInvalidArgument);
  replay.transcript_dir = fs::temp_directory_path() / "nodeagent_absent_store_dir";
  fs::remove_all(*replay.transcript_dir);
  EXPECT_EQ(CodeOf([&] { LlmBackend(replay, nullptr); }), ErrorCode::kStoreCorrupt);

  EXPECT_EQ(MakeBackend({})->mode_name(), "deterministic");
  EXPECT_EQ(ParseBackendMode("replay"), BackendMode::kReplay);
  EXPECT_FALSE(ParseBackendMode("gpt").has_value());
}

}  // namespace
}  // namespace nodeagent
