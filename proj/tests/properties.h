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

#ifndef NODEAGENT_TESTS_PROPERTIES_H_
#define NODEAGENT_TESTS_PROPERTIES_H_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nodeagent/engine.h"
#include "nodeagent/errors.h"
#include "nodeagent/programs.h"
#include "test_support.h"

namespace nodeagent::testing {

// Outcome of a randomized property run; `failure` is empty when every
// trial held.
struct PropertyOutcome {
  int trials = 0;
  int passed = 0;
  std::string failure;
  bool ok() const { return failure.empty() && passed == trials; }
};

inline constexpr std::int64_t kMixingModulus = 1000003;

// Every agent mixes its own value with the values it received; messages
// carry the superstep they were sent in.
inline VertexProgram MixingProgram() {
  VertexProgram p;
  p.name = "mixing";
  p.state_schema = {{"value", ValueKind::kInteger}};
  p.message_schema = {{"value", ValueKind::kInteger}, {"sent_at", ValueKind::kInteger}};
  p.init = [](const NodeContext& ctx) {
    return VertexState{{"value", std::int64_t{ctx.id + 1}}};
  };
  p.send = [](const NodeContext& ctx, const VertexState& s) {
    std::vector<MessageEnvelope> out;
    for (const auto& n : ctx.targets()) {
      out.push_back({ctx.id, n.id,
                     FieldMap{{"value", s.get<std::int64_t>("value")},
                              {"sent_at", static_cast<std::int64_t>(ctx.superstep)}}});
    }
    return out;
  };
  p.update = [](const NodeContext& ctx, const VertexState& s,
                std::span<const MessageEnvelope> inbox) {
    std::int64_t v = s.get<std::int64_t>("value") * 3;
    for (const auto& m : inbox) {
      if (m.payload.get<std::int64_t>("sent_at") !=
          static_cast<std::int64_t>(ctx.superstep) - 1) {
        throw Error(ErrorCode::kInvalidArgument, "message crossed a barrier");
      }
      v += m.payload.get<std::int64_t>("value");
    }
    return VertexState{{"value", v % kMixingModulus}};
  };
  return p;
}

inline std::vector<std::int64_t> MixingOracle(const Graph& g, std::size_t rounds) {
  const std::size_t n = g.node_count();
  std::vector<std::int64_t> value(n);
  for (std::size_t i = 0; i < n; ++i) value[i] = g.node_ids()[i] + 1;
  for (std::size_t r = 0; r < rounds; ++r) {
    std::vector<std::int64_t> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = value[i] * 3;
    for (std::size_t u = 0; u < n; ++u) {
      for (const auto& nb : g.neighbors(g.node_ids()[u])) next[g.index_of(nb.id)] += value[u];
    }
    for (auto& v : next) v %= kMixingModulus;
    value = std::move(next);
  }
  return value;
}

template <typename Trial>
PropertyOutcome RunTrials(int trials, Trial&& trial) {
  PropertyOutcome outcome;
  outcome.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::string failure;
    try {
      failure = trial(t);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (!failure.empty()) {
      outcome.failure = "trial " + std::to_string(t) + ": " + failure;
      return outcome;
    }
    ++outcome.passed;
  }
  return outcome;
}

inline PropertyOutcome CheckBarrierIsolation(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return RunTrials(trials, [&](int t) -> std::string {
    std::size_t n = RandomSize(rng, 2, 20);
    Graph g = RandomGraph(rng, n, RandomDensity(rng, n), t % 2 == 0, false);
    std::size_t rounds = RandomSize(rng, 1, 6);
    EngineConfig cfg;
    cfg.max_supersteps = rounds;
    cfg.deterministic_order = t % 3 != 0;
    cfg.schedule_seed = rng();
    cfg.workers = 1 + t % 3;
    DeterministicBackend backend;
    RunResult r = Run(g, MixingProgram(), backend, cfg);
    if (r.supersteps_executed != rounds) return "wrong superstep count";
    auto expected = MixingOracle(g, rounds);
    for (std::size_t i = 0; i < n; ++i) {
      if (r.final_states.at(g.node_ids()[i]).get<std::int64_t>("value") != expected[i]) {
        return "node " + std::to_string(i) + " saw a message outside its round";
      }
    }
    return "";
  });
}

inline VertexProgram ProgramForTrial(const Graph& g, int which) {
  switch (which % 6) {
    case 0: return ShortestPathProgram(g, g.node_ids().front());
    case 1: return ConnectivityProgram(g, g.node_ids().front(), g.node_ids().back());
    case 2: return CycleDetectionProgram(g);
    case 3: return PageRankProgram(g);
    case 4: return ReachabilityTreeProgram(g, g.node_ids().front(), std::nullopt);
    default: return HamiltonHeuristicProgram(g);
  }
}

inline PropertyOutcome CheckPermutationDeterminism(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return RunTrials(trials, [&](int t) -> std::string {
    std::size_t n = RandomSize(rng, 2, 25);
    Graph g = RandomGraph(rng, n, RandomDensity(rng, n), t % 2 == 1, true);
    VertexProgram p = ProgramForTrial(g, t);
    DeterministicBackend backend;
    RunResult base = Run(g, p, backend);
    EngineConfig shuffled;
    shuffled.deterministic_order = false;
    shuffled.schedule_seed = rng();
    shuffled.workers = 1 + t % 4;
    RunResult other = Run(g, p, backend, shuffled);
    if (base.final_states != other.final_states) return p.name + ": final states differ";
    if (base.supersteps_executed != other.supersteps_executed ||
        base.termination != other.termination || base.messages_sent != other.messages_sent) {
      return p.name + ": run summary differs";
    }
    return "";
  });
}

inline PropertyOutcome CheckEarlyTerminationIdempotence(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return RunTrials(trials, [&](int t) -> std::string {
    std::size_t n = RandomSize(rng, 2, 25);
    Graph g = RandomGraph(rng, n, RandomDensity(rng, n), t % 2 == 0, true);
    VertexProgram p = t % 2 ? ShortestPathProgram(g, g.node_ids().front())
                            : ReachabilityTreeProgram(g, g.node_ids().front(), std::nullopt);
    DeterministicBackend backend;
    RunResult first = Run(g, p, backend);
    if (first.termination != Termination::kConverged) return "did not reach quiescence";
    Engine engine(g, p, backend);
    engine.Initialize();
    while (engine.Superstep()) {
    }
    std::vector<VertexState> settled(engine.states().begin(), engine.states().end());
    for (int extra = 0; extra < 3; ++extra) {
      if (engine.Superstep()) return "an extra round reported a change";
      if (!std::equal(settled.begin(), settled.end(), engine.states().begin())) {
        return "an extra round changed a state";
      }
    }
    RunResult again = Run(g, p, backend);
    if (first.final_states != again.final_states ||
        first.supersteps_executed != again.supersteps_executed) {
      return "rerun differs";
    }
    return "";
  });
}

// Adds a message to a node that is not a neighbor of the sender.
class StrayMessageBackend final : public AgentBackend {
 public:
  StrayMessageBackend(NodeId culprit, NodeId stray) : culprit_(culprit), stray_(stray) {}
  PhaseResult ExecutePhase(const PhaseRequest& request) override {
    PhaseResult r = inner_.ExecutePhase(request);
    if (request.phase == Phase::kSend && request.ctx.id == culprit_) {
      r.messages.push_back({request.ctx.id, stray_,
                            r.messages.empty() ? FieldMap{{"new_distance", 0.0}}
                                               : r.messages.front().payload});
    }
    return r;
  }
  std::string_view mode_name() const override { return "stray"; }

 private:
  DeterministicBackend inner_;
  NodeId culprit_;
  NodeId stray_;
};

inline bool IsTarget(const Graph& g, NodeId u, NodeId v) {
  auto targets = g.neighbors(u);
  return std::any_of(targets.begin(), targets.end(),
                     [&](const Neighbor& nb) { return nb.id == v; });
}

inline PropertyOutcome CheckMessageLocality(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return RunTrials(trials, [&](int t) -> std::string {
    std::size_t n = RandomSize(rng, 3, 20);
    Graph g = RandomGraph(rng, n, RandomDensity(rng, n), t % 2 == 0, true);
    VertexProgram p = ShortestPathProgram(g, g.node_ids().front());
    DeterministicBackend backend;
    EngineConfig cfg;
    cfg.trace_enabled = true;
    RunResult r = Run(g, p, backend, cfg);
    std::vector<MessageEnvelope> all = r.trace->initial_messages;
    for (const auto& round : r.trace->rounds) {
      all.insert(all.end(), round.sent.begin(), round.sent.end());
    }
    for (const auto& m : all) {
      if (!IsTarget(g, m.sender, m.recipient)) return "message along a non-edge was delivered";
    }
    for (NodeId u : g.node_ids()) {
      for (NodeId v : g.node_ids()) {
        if (IsTarget(g, u, v)) continue;
        StrayMessageBackend stray(u, v);
        try {
          Run(g, p, stray);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kSchemaViolation) return "";
          return "stray message raised " + std::string(ErrorCodeName(e.code()));
        }
        return "stray message accepted";
      }
    }
    return "";
  });
}

inline PropertyOutcome CheckBellmanFordRoundBound(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double kInf = std::numeric_limits<double>::infinity();
  return RunTrials(trials, [&](int t) -> std::string {
    std::size_t n = RandomSize(rng, 2, 20);
    Graph g = RandomGraph(rng, n, RandomDensity(rng, n), t % 2 == 0, true);
    NodeId source = g.node_ids()[RandomSize(rng, 0, n - 1)];
    VertexProgram p = ShortestPathProgram(g, source);
    DeterministicBackend backend;
    Engine engine(g, p, backend);
    engine.Initialize();
    std::vector<double> bound(n, kInf);
    bound[g.index_of(source)] = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      engine.Superstep();
      std::vector<double> next = bound;
      for (std::size_t u = 0; u < n; ++u) {
        for (const auto& nb : g.neighbors(g.node_ids()[u])) {
          std::size_t v = g.index_of(nb.id);
          next[v] = std::min(next[v], bound[u] + *nb.weight);
        }
      }
      bound = std::move(next);
      for (std::size_t v = 0; v < n; ++v) {
        const Value& d = engine.states()[v].at("distance");
        double got = std::holds_alternative<Infinity>(d) ? kInf : *AsNumber(d);
        if (got != bound[v]) {
          std::ostringstream why;
          why << "round " << k << " node " << v << ": " << got << " vs bound " << bound[v];
          return why.str();
        }
      }
    }
    return "";
  });
}

}  // namespace nodeagent::testing

#endif  // NODEAGENT_TESTS_PROPERTIES_H_
