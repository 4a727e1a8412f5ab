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

#ifndef NODEAGENT_EVALUATION_H_
#define NODEAGENT_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nodeagent/answer.h"
#include "nodeagent/backend.h"
#include "nodeagent/engine.h"
#include "nodeagent/graph.h"
#include "nodeagent/orchestrator.h"
#include "nodeagent/value.h"

namespace nodeagent {

struct NodeRange {
  std::size_t min = 2;
  std::size_t max = 100;
};

// Node-count range of each task family in the benchmark suites.
NodeRange TaskNodeRange(Task task);

struct GeneratorOptions {
  // Expected degree is drawn uniformly from this interval; the edge
  // probability is degree / (n - 1), capped at 1.
  double min_mean_degree = 2;
  double max_mean_degree = 6;
  // Edge weights, capacities and node weights are integers in this range.
  int min_weight = 1;
  int max_weight = 10;
  // Accept sizes above the task's range (large shortest-path sweeps).
  bool allow_large = false;
};

struct InstanceSpec {
  Task task = Task::kCycle;
  std::size_t size = 0;
  std::uint64_t seed = 0;
  NodeRange node_range;
  double edge_probability = 0;
  std::string text;
  Graph graph;
  FieldMap params;
  Answer oracle_answer;
};

// Deterministic per (task, size, seed, options). Throws SizeOutOfRange.
InstanceSpec GenerateInstance(Task task, std::size_t size, std::uint64_t seed,
                              const GeneratorOptions& options = {});

// Ground truth from the sequential oracles. `params` uses the orchestrator
// names (source, target, sink, top_k).
Answer OracleSolve(Task task, const Graph& g, const FieldMap& params);

struct MatchTolerance {
  double number = 1e-9;
  double rank = 1e-3;
};

// Topological orders are checked with the edge-order verifier; rankings
// per node within tolerance.rank.
bool AnswersMatch(Task task, const Graph& g, const Answer& expected, const Answer& got,
                  const MatchTolerance& tolerance = {});

struct InstanceRecord {
  std::size_t size = 0;
  std::uint64_t seed = 0;
  std::string expected;
  std::string got;
  bool correct = false;
  std::size_t supersteps = 0;
  std::string error;
};

struct SizeBucket {
  std::size_t total = 0;
  std::size_t correct = 0;
};

struct SuiteReport {
  Task task = Task::kCycle;
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0;
  std::map<std::size_t, SizeBucket> by_size;
  std::vector<InstanceRecord> records;   // instance order
  std::vector<InstanceRecord> failures;  // incorrect or errored
};

using BackendFactory = std::function<std::unique_ptr<AgentBackend>()>;

struct SuiteConfig {
  Task task = Task::kCycle;
  std::size_t count = 0;
  // Instance i uses sizes[i % sizes.size()]; empty means the whole task range.
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  GeneratorOptions generator;
  EngineConfig engine;
  SolveOptions solve;
  MatchTolerance tolerance;
  // Defaults to a DeterministicBackend per worker.
  BackendFactory backend;
};

// Seed of instance i in a suite seeded with `suite_seed`.
std::uint64_t InstanceSeed(std::uint64_t suite_seed, std::size_t index);

// Generates, solves through the orchestrator from the rendered text and
// scores every instance. Errors are recorded per instance.
SuiteReport RunSuite(const SuiteConfig& config);

// task,size,seed,expected,got,correct,supersteps
void WriteSuiteCsv(const SuiteReport& report, std::ostream& out, bool header = true);
// task,size,total,correct,accuracy
void WriteAccuracyBySizeCsv(const SuiteReport& report, std::ostream& out,
                            bool header = true);
// One JSON object per line: task, size, seed, text, params, answer.
void WriteInstanceJsonl(const InstanceSpec& instance, std::ostream& out);

}  // namespace nodeagent

#endif  // NODEAGENT_EVALUATION_H_
