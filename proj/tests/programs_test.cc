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

#include "nodeagent/programs.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nodeagent/engine.h"
#include "nodeagent/errors.h"
#include "nodeagent/oracles.h"
#include "test_support.h"

namespace nodeagent {
namespace {

using testing::RandomDensity;
using testing::RandomGraph;
using testing::RandomSize;

RunResult RunDeterministic(const Graph& g, const VertexProgram& p, EngineConfig cfg = {}) {
  DeterministicBackend backend;
  return Run(g, p, backend, cfg);
}

Graph ConnectedWeighted(std::mt19937_64& rng, std::size_t n) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<Edge> edges;
  std::uniform_int_distribution<int> w(1, 10);
  for (std::size_t i = 1; i < n; ++i) {
    NodeId parent = static_cast<NodeId>(RandomSize(rng, 0, i - 1));
    edges.push_back({parent, static_cast<NodeId>(i), w(rng), {}});
  }
  std::bernoulli_distribution extra(3.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (extra(rng)) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), w(rng), {}});
    }
  }
  return Graph(ids, edges, false, true);
}

TEST(ShortestPathProgramTest, GoldenDistances) {
  Graph g = ParseGraph(testing::ReadData("golden_shortest_path.txt"), false, true);
  RunResult r = RunDeterministic(g, ShortestPathProgram(g, 1));
  const std::map<NodeId, double> expected{{0, 7}, {1, 0}, {2, 8}, {3, 14},
                                          {4, 8}, {5, 7}, {6, 13}, {7, 1}};
  for (const auto& [node, d] : expected) {
    EXPECT_EQ(r.final_states.at(node).at("distance"), Value(d)) << "node " << node;
  }
}

TEST(ShortestPathProgramTest, SendRuleWorkedExample) {
  Graph g = ParseGraph(testing::ReadData("golden_shortest_path.txt"), false, true);
  VertexProgram p = ShortestPathProgram(g, 1);
  FieldMap globals;
  NodeContext ctx{g, 1, 0, p.params, globals};
  auto out = p.send(ctx, VertexState{{"distance", 0.0}});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].recipient, 0);
  EXPECT_EQ(out[0].payload.at("new_distance"), Value(7.0));
  EXPECT_EQ(out[1].recipient, 7);
  EXPECT_EQ(out[1].payload.at("new_distance"), Value(1.0));
}

TEST(ShortestPathProgramTest, MatchesDijkstraOnConnectedGraphs) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = ConnectedWeighted(rng, 50);
    NodeId s = static_cast<NodeId>(RandomSize(rng, 0, 49));
    RunResult r = RunDeterministic(g, ShortestPathProgram(g, s));
    for (const auto& [node, d] : OracleShortestPaths(g, s)) {
      ASSERT_TRUE(d.has_value());
      EXPECT_EQ(*AsNumber(r.final_states.at(node).at("distance")), *d);
    }
  }
}

TEST(ShortestPathProgramTest, UnreachableStaysInfinite) {
  Graph g({0, 1, 2}, {{0, 1, 4.0, {}}}, false, true);
  RunResult r = RunDeterministic(g, ShortestPathProgram(g, 0));
  EXPECT_EQ(r.final_states.at(2).at("distance"), Value(Infinity{}));
}

TEST(ShortestPathProgramTest, NegativeWeightRejected) {
  Graph g = ParseGraph("The graph has 2 nodes: (0,1,-3)", false, true);
  try {
    ShortestPathProgram(g, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNegativeWeight);
  }
}

TEST(ShortestPathProgramTest, UnknownSource) {
  Graph g({0, 1}, {}, false, false);
  EXPECT_THROW(ShortestPathProgram(g, 9), Error);
}

TEST(ConnectivityProgramTest, MatchesBreadthFirstReachability) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = RandomGraph(rng, 10, RandomDensity(rng, 10), trial % 2 == 0, false);
    RunResult r = RunDeterministic(g, ConnectivityProgram(g, 0, 9));
    auto reach = OracleReachable(g, 0);
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(r.final_states.at(g.node_ids()[i]).get<bool>("reached"), reach[i]);
    }
  }
}

TEST(ConnectivityProgramTest, MatchesUnionFind) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = RandomGraph(rng, 100, RandomDensity(rng, 100) / 2, false, false);
    NodeId a = static_cast<NodeId>(RandomSize(rng, 0, 99));
    NodeId b = static_cast<NodeId>(RandomSize(rng, 0, 99));
    RunResult r = RunDeterministic(g, ConnectivityProgram(g, a, b));
    EXPECT_EQ(r.final_states.at(b).get<bool>("reached"), OracleConnected(g, a, b));
  }
}

bool AnyActive(const RunResult& r) {
  return std::any_of(r.final_states.begin(), r.final_states.end(),
                     [](const auto& s) { return s.second.template get<bool>("active"); });
}

TEST(CycleProgramTest, MatchesDepthFirstSearch) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    bool directed = trial % 2 == 0;
    Graph g = RandomGraph(rng, 80, RandomDensity(rng, 80) / (directed ? 3 : 1.5), directed, false);
    RunResult r = RunDeterministic(g, CycleDetectionProgram(g));
    EXPECT_EQ(AnyActive(r), OracleHasCycle(g)) << SerializeGraph(g);
  }
}

TEST(CycleProgramTest, SmallCases) {
  Graph tree({0, 1, 2, 3}, {{0, 1, {}, {}}, {1, 2, {}, {}}, {1, 3, {}, {}}}, false, false);
  EXPECT_FALSE(AnyActive(RunDeterministic(tree, CycleDetectionProgram(tree))));
  Graph triangle({0, 1, 2}, {{0, 1, {}, {}}, {1, 2, {}, {}}, {2, 0, {}, {}}}, false, false);
  EXPECT_TRUE(AnyActive(RunDeterministic(triangle, CycleDetectionProgram(triangle))));
  Graph loop({0, 1}, {{0, 0, {}, {}}, {0, 1, {}, {}}}, false, false);
  EXPECT_TRUE(AnyActive(RunDeterministic(loop, CycleDetectionProgram(loop))));
  Graph dag({0, 1, 2}, {{0, 1, {}, {}}, {0, 2, {}, {}}, {1, 2, {}, {}}}, true, false);
  EXPECT_FALSE(AnyActive(RunDeterministic(dag, CycleDetectionProgram(dag))));
}

bool NoConflict(const RunResult& r) {
  return std::none_of(r.final_states.begin(), r.final_states.end(),
                      [](const auto& s) { return s.second.template get<bool>("conflict"); });
}

TEST(BipartiteProgramTest, MatchesTwoColoringAndOddCycles) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    Graph g = RandomGraph(rng, 100, RandomDensity(rng, 100) / 2.5, false, false);
    RunResult r = RunDeterministic(g, BipartiteProgram(g));
    for (const auto& [node, s] : r.final_states) ASSERT_FALSE(s.is_unset("color"));
    bool bipartite = NoConflict(r);
    EXPECT_EQ(bipartite, OracleBipartite(g));
    EXPECT_EQ(bipartite, !OracleHasOddCycle(g));
  }
}

TEST(BipartiteProgramTest, EvenAndOddCycles) {
  Graph square({0, 1, 2, 3}, {{0, 1, {}, {}}, {1, 2, {}, {}}, {2, 3, {}, {}}, {3, 0, {}, {}}},
               false, false);
  EXPECT_TRUE(NoConflict(RunDeterministic(square, BipartiteProgram(square))));
  Graph triangle({0, 1, 2}, {{0, 1, {}, {}}, {1, 2, {}, {}}, {2, 0, {}, {}}}, false, false);
  EXPECT_FALSE(NoConflict(RunDeterministic(triangle, BipartiteProgram(triangle))));
}

std::vector<NodeId> LayerOrder(const RunResult& r) {
  std::vector<std::pair<std::int64_t, NodeId>> layered;
  for (const auto& [node, s] : r.final_states) {
    if (!s.is_unset("layer")) layered.emplace_back(s.get<std::int64_t>("layer"), node);
  }
  std::sort(layered.begin(), layered.end());
  std::vector<NodeId> order;
  for (const auto& [layer, node] : layered) order.push_back(node);
  return order;
}

TEST(TopologicalSortProgramTest, ProducesValidOrders) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = RandomSize(rng, 2, 50);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> edges;
    std::bernoulli_distribution coin(RandomDensity(rng, n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (coin(rng)) edges.push_back({perm[i], perm[j], {}, {}});
      }
    }
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    Graph g(ids, edges, true, false);
    RunResult r = RunDeterministic(g, TopologicalSortProgram(g));
    EXPECT_TRUE(VerifyTopologicalOrder(g, LayerOrder(r)));
  }
}

TEST(TopologicalSortProgramTest, CycleLeavesNodesUnlayered) {
  Graph g({0, 1, 2}, {{0, 1, {}, {}}, {1, 2, {}, {}}, {2, 1, {}, {}}}, true, false);
  RunResult r = RunDeterministic(g, TopologicalSortProgram(g));
  EXPECT_FALSE(r.final_states.at(0).is_unset("layer"));
  EXPECT_TRUE(r.final_states.at(1).is_unset("layer"));
  EXPECT_TRUE(r.final_states.at(2).is_unset("layer"));
}

TEST(TopologicalSortProgramTest, RequiresDirectedGraph) {
  Graph g({0, 1}, {{0, 1, {}, {}}}, false, false);
  EXPECT_THROW(TopologicalSortProgram(g), Error);
}

std::optional<double> BestSum(const RunResult& r) {
  std::optional<double> best;
  for (const auto& [node, s] : r.final_states) {
    if (s.is_unset("best_sum")) continue;
    double v = *AsNumber(s.at("best_sum"));
    if (!best || v > *best) best = v;
  }
  return best;
}

TEST(TriangleSumProgramTest, MatchesExhaustiveTriplets) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = RandomSize(rng, 2, 25);
    Graph base = RandomGraph(rng, n, std::min(1.0, 2 * RandomDensity(rng, n)), false, false);
    std::map<NodeId, double> weights;
    std::uniform_int_distribution<int> w(1, 10);
    for (NodeId v : base.node_ids()) weights[v] = w(rng);
    Graph g({base.node_ids().begin(), base.node_ids().end()},
            {base.edges().begin(), base.edges().end()}, false, false, weights);
    RunResult r = RunDeterministic(g, TriangleSumProgram(g));
    EXPECT_EQ(BestSum(r), OracleMaxTriangleSum(g));
  }
}

TEST(TriangleSumProgramTest, RejectsEdgeWeightsAndMissingNodeWeights) {
  Graph weighted({0, 1, 2}, {{0, 1, 2.0, {}}}, false, true, {{0, 1}, {1, 1}, {2, 1}});
  EXPECT_THROW(TriangleSumProgram(weighted), Error);
  Graph bare({0, 1, 2}, {{0, 1, {}, {}}}, false, false);
  EXPECT_THROW(TriangleSumProgram(bare), Error);
}

double RankSum(std::span<const VertexState> states) {
  double sum = 0;
  for (const auto& s : states) sum += s.get<double>("rank");
  return sum;
}

TEST(PageRankProgramTest, MassIsConservedEverySuperstep) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = RandomSize(rng, 2, 30);
    Graph g = RandomGraph(rng, n, RandomDensity(rng, n), true, false);
    VertexProgram p = PageRankProgram(g);
    DeterministicBackend backend;
    Engine engine(g, p, backend);
    engine.Initialize();
    EXPECT_NEAR(RankSum(engine.states()), 1.0, 1e-9);
    for (int step = 0; step < 60 && engine.Superstep(); ++step) {
      EXPECT_NEAR(RankSum(engine.states()), 1.0, 1e-9);
    }
  }
}

TEST(PageRankProgramTest, CompleteGraphIsUniform) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < 4; ++u) {
    for (NodeId v = 0; v < 4; ++v) {
      if (u != v) edges.push_back({u, v, {}, {}});
    }
  }
  Graph k4({0, 1, 2, 3}, edges, true, false);
  RunResult r = RunDeterministic(k4, PageRankProgram(k4));
  for (const auto& [node, s] : r.final_states) EXPECT_NEAR(s.get<double>("rank"), 0.25, 1e-12);
}

TEST(PageRankProgramTest, MatchesPowerIteration) {
  std::mt19937_64 rng(9);
  PageRankOptions tight{0.85, 1e-13, 5000};
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = RandomGraph(rng, 20, RandomDensity(rng, 20), true, false);
    RunResult r = RunDeterministic(g, PageRankProgram(g, tight));
    EXPECT_NE(r.termination, Termination::kIterationCapReached);
    auto oracle = OraclePageRank(g);
    for (std::size_t i = 0; i < 20; ++i) {
      EXPECT_NEAR(r.final_states.at(g.node_ids()[i]).get<double>("rank"), oracle[i], 1e-8);
    }
  }
}

TEST(HamiltonProgramTest, UpdateWorkedExample) {
  Graph g = ParseGraph(testing::ReadData("golden_hamilton.txt"), false, false);
  VertexProgram p = HamiltonHeuristicProgram(g);
  FieldMap globals;
  NodeContext ctx{g, 1, 1, p.params, globals};
  VertexState state{{"visited", false}, {"path_length", std::int64_t{1}},
                    {"max_path_length", std::int64_t{2}}};
  std::vector<MessageEnvelope> inbox{
      {0, 1, FieldMap{{"path_length", std::int64_t{2}}, {"max_path_length", std::int64_t{3}},
                      {"visited_flag", false}}},
      {2, 1, FieldMap{{"path_length", std::int64_t{3}}, {"max_path_length", std::int64_t{4}},
                      {"visited_flag", true}}}};
  VertexState next = p.update(ctx, state, inbox);
  EXPECT_EQ(next, (VertexState{{"visited", true}, {"path_length", std::int64_t{3}},
                               {"max_path_length", std::int64_t{3}}}));
}

TEST(HamiltonProgramTest, SendWorkedExample) {
  Graph g = ParseGraph(testing::ReadData("golden_hamilton.txt"), false, false);
  VertexProgram p = HamiltonHeuristicProgram(g);
  FieldMap globals;
  NodeContext ctx{g, 0, 1, p.params, globals};
  auto out = p.send(ctx, VertexState{{"visited", false}, {"path_length", std::int64_t{2}},
                                     {"max_path_length", std::int64_t{3}}});
  ASSERT_EQ(out.size(), g.neighbors(0).size());
  for (const auto& m : out) {
    EXPECT_EQ(m.payload, (FieldMap{{"path_length", std::int64_t{3}},
                                   {"max_path_length", std::int64_t{3}},
                                   {"visited_flag", false}}));
  }
}

std::int64_t LongestPath(const RunResult& r) {
  std::int64_t best = 0;
  for (const auto& [node, s] : r.final_states) {
    best = std::max(best, s.get<std::int64_t>("path_length"));
  }
  return best;
}

TEST(HamiltonProgramTest, HeuristicSaysNoOnGoldenGraphWhileOracleFindsPath) {
  Graph g = ParseGraph(testing::ReadData("golden_hamilton.txt"), false, false);
  RunResult r = RunDeterministic(g, HamiltonHeuristicProgram(g));
  EXPECT_LT(LongestPath(r), static_cast<std::int64_t>(g.node_count()));
  EXPECT_TRUE(OracleHamiltonPath(g));
  EXPECT_TRUE(HamiltonHeuristicProgram(g).heuristic);
}

TEST(HamiltonProgramTest, PathGraphExactAnswerIsYes) {
  Graph path({0, 1, 2}, {{0, 1, {}, {}}, {1, 2, {}, {}}}, false, false);
  EXPECT_TRUE(OracleHamiltonPath(path));
}

TEST(ProgramRulesTest, EmptyInboxLeavesStateUnchanged) {
  std::mt19937_64 rng(10);
  Graph g = RandomGraph(rng, 12, 0.3, false, false);
  std::map<NodeId, double> weights;
  for (NodeId v : g.node_ids()) weights[v] = 1.0 + static_cast<double>(v);
  Graph gw({g.node_ids().begin(), g.node_ids().end()}, {g.edges().begin(), g.edges().end()},
           false, false, weights);
  Graph dag({0, 1, 2}, {{0, 1, {}, {}}, {1, 2, {}, {}}}, true, false);
  std::vector<std::pair<const Graph*, VertexProgram>> programs;
  programs.emplace_back(&g, ShortestPathProgram(g, 0));
  programs.emplace_back(&g, ConnectivityProgram(g, 0, 1));
  programs.emplace_back(&g, BipartiteProgram(g));
  programs.emplace_back(&dag, TopologicalSortProgram(dag));
  programs.emplace_back(&gw, TriangleSumProgram(gw));
  programs.emplace_back(&g, ReachabilityTreeProgram(g, 0, std::nullopt));
  programs.emplace_back(&g, HamiltonHeuristicProgram(g));
  for (const auto& [graph, p] : programs) {
    FieldMap globals;
    for (NodeId v : graph->node_ids()) {
      NodeContext init_ctx{*graph, v, 0, p.params, globals};
      VertexState s = p.init(init_ctx);
      NodeContext ctx{*graph, v, 3, p.params, globals};
      EXPECT_EQ(p.update(ctx, s, {}), s) << p.name << " node " << v;
    }
  }
}

TEST(ProgramRulesTest, CycleEmptyInboxOnlyPrunesLeaves) {
  std::mt19937_64 rng(11);
  Graph g = RandomGraph(rng, 12, 0.3, false, false);
  VertexProgram p = CycleDetectionProgram(g);
  FieldMap globals;
  for (NodeId v : g.node_ids()) {
    NodeContext ctx{g, v, 3, p.params, globals};
    VertexState s = p.init(ctx);
    VertexState next = p.update(ctx, s, {});
    EXPECT_EQ(next.get<std::int64_t>("current_degree"),
              s.get<std::int64_t>("current_degree"));
    EXPECT_EQ(next.get<bool>("active"), g.degree(v) > 1) << "node " << v;
  }
}

TEST(AlgorithmLibraryTest, EveryTemplateHasSixSections) {
  auto library = AlgorithmLibrary();
  EXPECT_GE(library.size(), 9u);
  for (const auto& t : library) {
    EXPECT_TRUE(ParseTemplateSections(t.document).complete()) << t.name;
    EXPECT_FALSE(t.description.empty());
  }
}

}  // namespace
}  // namespace nodeagent
