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

#include <benchmark/benchmark.h>

#include <cstdint>

#include "nodeagent/engine.h"
#include "nodeagent/evaluation.h"
#include "nodeagent/orchestrator.h"
#include "nodeagent/programs.h"
#include "nodeagent/prompt.h"

namespace nodeagent {
namespace {

InstanceSpec LargeShortestPath(std::size_t n) {
  GeneratorOptions options;
  options.allow_large = true;
  return GenerateInstance(Task::kShortestPath, n, 17, options);
}

void BM_ShortestPathRun(benchmark::State& state) {
  InstanceSpec instance = LargeShortestPath(static_cast<std::size_t>(state.range(0)));
  VertexProgram program =
      ShortestPathProgram(instance.graph, instance.params.get<NodeRef>("source").id);
  EngineConfig config;
  config.workers = static_cast<std::size_t>(state.range(1));
  DeterministicBackend backend;
  std::size_t supersteps = 0;
  for (auto _ : state) {
    RunResult r = Run(instance.graph, program, backend, config);
    supersteps = r.supersteps_executed;
    benchmark::DoNotOptimize(r.final_states);
  }
  state.counters["supersteps"] = static_cast<double>(supersteps);
  state.counters["nodes/s"] = benchmark::Counter(
      static_cast<double>(state.range(0) * supersteps), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_ShortestPathRun)
    ->ArgsProduct({{100, 1000, 5000}, {1, 4}})
    ->Unit(benchmark::kMillisecond);

void BM_PageRankRun(benchmark::State& state) {
  InstanceSpec instance = GenerateInstance(Task::kPageRank, 100, 3);
  VertexProgram program = PageRankProgram(instance.graph, {0.85, 1e-10, 1000});
  DeterministicBackend backend;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Run(instance.graph, program, backend).final_states);
  }
}
BENCHMARK(BM_PageRankRun)->Unit(benchmark::kMillisecond);

void BM_SolvePipeline(benchmark::State& state) {
  const Task task = static_cast<Task>(state.range(0));
  InstanceSpec instance = GenerateInstance(task, 20, 5);
  DeterministicBackend backend;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Solve(instance.text, backend).answer);
  }
  state.SetLabel(std::string(TaskName(task)));
}
BENCHMARK(BM_SolvePipeline)->DenseRange(0, 8)->Unit(benchmark::kMicrosecond);

void BM_PromptRoundTrip(benchmark::State& state) {
  Graph g = ParseGraph("The graph has 4 nodes: (0,1,3) (1,2,4) (2,3,1) (3,0,2)", false, true);
  VertexProgram program = ShortestPathProgram(g, 0);
  FieldMap globals;
  NodeContext ctx{g, 1, 2, program.params, globals};
  VertexState vertex_state{{"distance", 3.0}};
  PhaseRequest request{program, ctx, Phase::kSend, vertex_state, {}};
  PhaseResult result{vertex_state, {{1, 0, {{"new_distance", 6.0}}}, {1, 2, {{"new_distance", 7.0}}}}};
  for (auto _ : state) {
    PhasePrompt prompt = RenderPhasePrompt(request);
    benchmark::DoNotOptimize(prompt.user);
    benchmark::DoNotOptimize(ParsePhaseReply(request, RenderPhaseReply(request, result)));
  }
}
BENCHMARK(BM_PromptRoundTrip)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace nodeagent

BENCHMARK_MAIN();
