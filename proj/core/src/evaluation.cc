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

#include "nodeagent/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "nodeagent/errors.h"
#include "nodeagent/oracles.h"

namespace nodeagent {
namespace {

bool Close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(a));
}

}  // namespace

bool AnswersMatch(Task task, const Graph& g, const Answer& expected, const Answer& got,
                  const MatchTolerance& tolerance) {
  if (task == Task::kTopoSort) {
    const auto* order = std::get_if<std::vector<NodeId>>(&got.value);
    return order && VerifyTopologicalOrder(g, *order);
  }
  if (expected.kind != got.kind) return false;
  switch (expected.kind) {
    case AnswerKind::kNoSolution:
      return true;
    case AnswerKind::kBoolean:
      return std::get<bool>(expected.value) == std::get<bool>(got.value);
    case AnswerKind::kNumber:
      return Close(std::get<double>(expected.value), std::get<double>(got.value),
                   tolerance.number);
    case AnswerKind::kOrdering:
      return expected.value == got.value;
    case AnswerKind::kDistanceMap: {
      auto a = std::get<DistanceMap>(expected.value);
      auto b = std::get<DistanceMap>(got.value);
      if (a.size() != b.size()) return false;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].first != b[i].first || a[i].second.has_value() != b[i].second.has_value()) {
          return false;
        }
        if (a[i].second && !Close(*a[i].second, *b[i].second, tolerance.number)) return false;
      }
      return true;
    }
    case AnswerKind::kRanking: {
      auto a = std::get<Ranking>(expected.value);
      auto b = std::get<Ranking>(got.value);
      if (a.size() != b.size()) return false;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].first != b[i].first || std::fabs(a[i].second - b[i].second) > tolerance.rank) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

std::uint64_t InstanceSeed(std::uint64_t suite_seed, std::size_t index) {
  // splitmix64 step
  std::uint64_t z = suite_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SuiteReport RunSuite(const SuiteConfig& config) {
  SuiteReport report;
  report.task = config.task;
  std::vector<std::size_t> sizes = config.sizes;
  if (sizes.empty()) {
    NodeRange r = TaskNodeRange(config.task);
    for (std::size_t s = r.min; s <= r.max; ++s) sizes.push_back(s);
  }
  report.records.resize(config.count);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::unique_ptr<AgentBackend> backend =
        config.backend ? config.backend() : std::make_unique<DeterministicBackend>();
    for (std::size_t i = next++; i < config.count; i = next++) {
      InstanceRecord& rec = report.records[i];
      rec.size = sizes[i % sizes.size()];
      rec.seed = InstanceSeed(config.seed, i);
      try {
        InstanceSpec inst = GenerateInstance(config.task, rec.size, rec.seed, config.generator);
        rec.expected = CompactValue(inst.oracle_answer.value);
        Solution solution = Solve(inst.text, *backend, config.engine, config.solve);
        rec.got = CompactValue(solution.answer.value);
        rec.supersteps = solution.supersteps;
        rec.correct = AnswersMatch(config.task, inst.graph, inst.oracle_answer,
                                   solution.answer, config.tolerance);
      } catch (const Error& e) {
        rec.error = e.what();
        rec.got = "error:" + std::string(ErrorCodeName(e.code()));
      } catch (const std::exception& e) {
        rec.error = e.what();
        rec.got = "error:exception";
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(config.workers, config.count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const InstanceRecord& rec : report.records) {
    ++report.total;
    SizeBucket& bucket = report.by_size[rec.size];
    ++bucket.total;
    if (rec.correct) {
      ++report.correct;
      ++bucket.correct;
    } else {
      report.failures.push_back(rec);
    }
  }
  report.accuracy = report.total ? static_cast<double>(report.correct) /
                                       static_cast<double>(report.total)
                                 : 0.0;
  return report;
}

void WriteSuiteCsv(const SuiteReport& report, std::ostream& out, bool header) {
  if (header) out << "task,size,seed,expected,got,correct,supersteps\n";
  for (const InstanceRecord& r : report.records) {
    out << TaskName(report.task) << ',' << r.size << ',' << r.seed << ',' << r.expected << ','
        << r.got << ',' << (r.correct ? 1 : 0) << ',' << r.supersteps << '\n';
  }
}

void WriteAccuracyBySizeCsv(const SuiteReport& report, std::ostream& out, bool header) {
  if (header) out << "task,size,total,correct,accuracy\n";
  for (const auto& [size, b] : report.by_size) {
    double acc = b.total ? static_cast<double>(b.correct) / static_cast<double>(b.total) : 0.0;
    out << TaskName(report.task) << ',' << size << ',' << b.total << ',' << b.correct << ','
        << FormatReal(acc) << '\n';
  }
}

void WriteInstanceJsonl(const InstanceSpec& instance, std::ostream& out) {
  nlohmann::ordered_json j;
  j["task"] = std::string(TaskName(instance.task));
  j["size"] = instance.size;
  j["seed"] = instance.seed;
  j["text"] = instance.text;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [name, value] : instance.params) {
    if (const auto* ref = std::get_if<NodeRef>(&value)) {
      params[name] = ref->id;
    } else if (const auto* i = std::get_if<std::int64_t>(&value)) {
      params[name] = *i;
    }
  }
  j["params"] = params;
  j["answer"] = {{"kind", std::string(AnswerKindName(instance.oracle_answer.kind))},
                 {"value", nlohmann::json::parse(ValueToJson(instance.oracle_answer.value))},
                 {"narrative", instance.oracle_answer.narrative}};
  out << j.dump() << '\n';
}

}  // namespace nodeagent
