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

#include "nodeagent/engine.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "fnv.h"
#include "nodeagent/errors.h"

namespace nodeagent {

std::string_view TerminationName(Termination t) {
  switch (t) {
    case Termination::kConverged: return "Converged";
    case Termination::kTerminationRuleMet: return "TerminationRuleMet";
    case Termination::kIterationCapReached: return "IterationCapReached";
  }
  return "Unknown";
}

Engine::Engine(const Graph& graph, const VertexProgram& program,
               AgentBackend& backend, EngineConfig config)
    : graph_(graph), program_(program), backend_(backend), config_(config) {
  if (config_.max_supersteps) {
    if (*config_.max_supersteps == 0) {
      throw Error(ErrorCode::kInvalidArgument, "max_supersteps must be >= 1");
    }
    cap_ = *config_.max_supersteps;
  } else if (program_.default_cap) {
    cap_ = std::max<std::size_t>(1, program_.default_cap(graph_.node_count()));
  } else {
    cap_ = graph_.node_count() + 1;
  }
  order_.resize(graph_.node_count());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!config_.deterministic_order) {
    std::mt19937_64 rng(config_.schedule_seed);
    std::shuffle(order_.begin(), order_.end(), rng);
  }
  if (config_.trace_enabled) trace_.emplace();
}

template <typename Fn>
void Engine::ForEachAgent(Fn&& fn) {
  std::size_t workers = std::min({config_.workers, backend_.max_concurrency(),
                                  order_.size()});
  if (workers <= 1) {
    for (std::size_t i : order_) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t k = next.fetch_add(1);
        if (k >= order_.size()) return;
        try {
          fn(order_[k]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

PhaseResult Engine::Execute(std::size_t index, Phase phase,
                            const VertexState& state,
                            std::span<const MessageEnvelope> inbox) {
  NodeContext ctx{graph_, graph_.node_ids()[index], superstep_, program_.params,
                  globals_};
  PhaseRequest request{program_, ctx, phase, state, inbox};
  try {
    return backend_.ExecutePhase(request);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kBackendFailure,
                "node " + std::to_string(ctx.id) + " " +
                    std::string(PhaseName(phase)) + ": " + e.what());
  }
}

void Engine::ValidateState(NodeId node, const VertexState& state) const {
  std::string problem = CheckSchema(program_.state_schema, state);
  if (!problem.empty()) {
    throw Error(ErrorCode::kSchemaViolation,
                "state of node " + std::to_string(node) + ": " + problem);
  }
}

void Engine::ValidateMessages(NodeId node,
                              const std::vector<MessageEnvelope>& out) const {
  auto targets = graph_.neighbors(node);
  for (const auto& m : out) {
    if (m.sender != node) {
      throw Error(ErrorCode::kSchemaViolation,
                  "node " + std::to_string(node) + " sent a message as node " +
                      std::to_string(m.sender));
    }
    bool is_neighbor = std::binary_search(
        targets.begin(), targets.end(), Neighbor{m.recipient, std::nullopt},
        [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    if (!is_neighbor) {
      throw Error(ErrorCode::kSchemaViolation,
                  "message from node " + std::to_string(node) + " to node " +
                      std::to_string(m.recipient) + " does not follow an edge");
    }
    std::string problem = CheckSchema(program_.message_schema, m.payload);
    if (!problem.empty()) {
      throw Error(ErrorCode::kSchemaViolation,
                  "message from node " + std::to_string(node) + ": " + problem);
    }
  }
}

void Engine::SendAll() {
  if (program_.aggregate) globals_ = program_.aggregate(graph_, states_);
  std::vector<std::vector<MessageEnvelope>> outboxes(states_.size());
  ForEachAgent([&](std::size_t i) {
    PhaseResult r = Execute(i, Phase::kSend, states_[i], {});
    ValidateMessages(graph_.node_ids()[i], r.messages);
    outboxes[i] = std::move(r.messages);
  });
  pending_.clear();
  for (auto& box : outboxes) {
    for (auto& m : box) pending_.push_back(std::move(m));
  }
  messages_sent_ += pending_.size();
}

void Engine::Initialize() {
  backend_.BeginRun(ProblemKey(graph_, program_));
  superstep_ = 0;
  messages_sent_ = 0;
  globals_ = FieldMap{};
  states_.assign(graph_.node_count(), VertexState{});
  static const VertexState kEmpty;
  ForEachAgent([&](std::size_t i) {
    PhaseResult r = Execute(i, Phase::kInit, kEmpty, {});
    ValidateState(graph_.node_ids()[i], r.state);
    states_[i] = std::move(r.state);
  });
  SendAll();
  initialized_ = true;
  if (trace_) {
    *trace_ = Trace{};
    for (std::size_t i = 0; i < states_.size(); ++i) {
      trace_->initial_states.emplace_back(graph_.node_ids()[i], states_[i]);
    }
    trace_->initial_messages = pending_;
  }
}

bool Engine::Superstep() {
  if (!initialized_) {
    throw Error(ErrorCode::kInvalidArgument, "engine not initialized");
  }
  ++superstep_;

  // Deliver: bucket by recipient, ordered by sender id.
  std::vector<std::vector<MessageEnvelope>> inboxes(states_.size());
  for (const auto& m : pending_) {
    inboxes[graph_.index_of(m.recipient)].push_back(m);
  }
  for (auto& box : inboxes) {
    std::stable_sort(box.begin(), box.end(),
                     [](const MessageEnvelope& a, const MessageEnvelope& b) {
                       return a.sender < b.sender;
                     });
  }

  std::vector<VertexState> next(states_.size());
  ForEachAgent([&](std::size_t i) {
    PhaseResult r = Execute(i, Phase::kUpdate, states_[i], inboxes[i]);
    ValidateState(graph_.node_ids()[i], r.state);
    next[i] = std::move(r.state);
  });

  TraceRound round;
  round.superstep = superstep_;
  bool changed = false;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!ApproxEqual(states_[i], next[i], config_.change_tolerance)) {
      changed = true;
      if (trace_) round.diffs.push_back({graph_.node_ids()[i], states_[i], next[i]});
    }
  }
  // Barrier: publish all new states at once.
  states_ = std::move(next);

  if (!changed && program_.select_seed && program_.seed) {
    if (auto node = program_.select_seed(graph_, states_)) {
      std::size_t i = graph_.index_of(*node);
      NodeContext ctx{graph_, *node, superstep_, program_.params, globals_};
      VertexState seeded = program_.seed(ctx, states_[i]);
      ValidateState(*node, seeded);
      if (trace_) round.diffs.push_back({*node, states_[i], seeded});
      states_[i] = std::move(seeded);
      round.reseeded = *node;
      changed = true;
    }
  }

  if (trace_) {
    for (auto& box : inboxes) {
      for (auto& m : box) round.delivered.push_back(std::move(m));
    }
  }
  SendAll();
  if (trace_) {
    round.sent = pending_;
    round.changed = changed;
    trace_->rounds.push_back(std::move(round));
  }
  return changed;
}

bool Engine::TerminationMet() const {
  return program_.terminate && program_.terminate(graph_, states_, superstep_);
}

RunResult Engine::Result(Termination termination) const {
  RunResult result;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    result.final_states.emplace(graph_.node_ids()[i], states_[i]);
  }
  result.supersteps_executed = superstep_;
  result.termination = termination;
  result.messages_sent = messages_sent_;
  result.trace = trace_;
  return result;
}

RunResult Run(const Graph& graph, const VertexProgram& program,
              AgentBackend& backend, const EngineConfig& config) {
  Engine engine(graph, program, backend, config);
  engine.Initialize();
  for (;;) {
    if (engine.TerminationMet()) {
      return engine.Result(Termination::kTerminationRuleMet);
    }
    if (engine.superstep() >= engine.max_supersteps()) {
      return engine.Result(Termination::kIterationCapReached);
    }
    if (!engine.Superstep()) return engine.Result(Termination::kConverged);
  }
}

std::string ProblemKey(const Graph& graph, const VertexProgram& program) {
  std::string material = program.name;
  for (const auto& [name, value] : program.params) {
    material += "|" + name + "=" + RenderValue(value);
  }
  material += "|" + SerializeGraph(graph);
  return internal::Hex64(internal::Fnv1a64(material));
}

std::string RenderStateInline(const FieldMap& fields) {
  std::string out;
  std::size_t k = 0;
  for (const auto& [name, value] : fields) {
    if (k) out += " ";
    out += std::to_string(++k) + ". " + name + ": " + RenderValue(value);
  }
  return out;
}

namespace {

void RenderMessages(std::ostringstream& out,
                    const std::vector<MessageEnvelope>& messages) {
  for (const auto& m : messages) {
    out << "Node " << m.sender << " Send Message to Node " << m.recipient
        << ": " << RenderStateInline(m.payload) << "\n";
  }
}

}  // namespace

std::string RenderTrace(const RunResult& result) {
  std::ostringstream out;
  if (result.trace) {
    const Trace& trace = *result.trace;
    out << "Initialization:\n";
    for (const auto& [node, state] : trace.initial_states) {
      out << node << ": State: " << RenderStateInline(state) << "\n";
    }
    RenderMessages(out, trace.initial_messages);
    for (const auto& round : trace.rounds) {
      out << "Round " << round.superstep << ":\n";
      for (const auto& d : round.diffs) {
        out << d.node << ": State: " << RenderStateInline(d.after) << "\n";
      }
      if (round.reseeded) {
        out << "Master re-seeds Node " << *round.reseeded << "\n";
      }
      RenderMessages(out, round.sent);
    }
  }
  switch (result.termination) {
    case Termination::kConverged:
      out << "All agents' state unchanged, terminating early...\n";
      break;
    case Termination::kTerminationRuleMet:
      out << "Termination condition met, stopping...\n";
      break;
    case Termination::kIterationCapReached:
      out << "Maximum number of iterations reached, stopping...\n";
      break;
  }
  for (const auto& [node, state] : result.final_states) {
    out << "Node: " << node << "  State: " << RenderStateInline(state) << "\n";
  }
  return out.str();
}

}  // namespace nodeagent
