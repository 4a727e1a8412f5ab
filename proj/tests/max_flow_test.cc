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

#include "nodeagent/max_flow.h"

#include <gtest/gtest.h>

#include <random>

#include "nodeagent/errors.h"
#include "nodeagent/oracles.h"
#include "test_support.h"

namespace nodeagent {
namespace {

TEST(MaxFlowTest, ClassicNetwork) {
  // Two disjoint routes of capacity 3 and 2 plus a cross edge.
  Graph g({0, 1, 2, 3}, {{0, 1, 3.0, {}}, {0, 2, 2.0, {}}, {1, 3, 2.0, {}}, {2, 3, 3.0, {}},
                         {1, 2, 1.0, {}}},
          true, true);
  DeterministicBackend backend;
  MaxFlowResult r = RunMaxFlow(g, 0, 3, backend);
  EXPECT_EQ(r.value, 5.0);
  EXPECT_EQ(r.cut_capacity, 5.0);
  EXPECT_EQ(r.source_side, std::vector<NodeId>({0}));
  EXPECT_GE(r.augmentations, 2u);
}

TEST(MaxFlowTest, MatchesSequentialEdmondsKarp) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = testing::RandomGraph(rng, 30, testing::RandomDensity(rng, 30), true, true);
    NodeId s = static_cast<NodeId>(testing::RandomSize(rng, 0, 29));
    NodeId t = (s + 1 + static_cast<NodeId>(testing::RandomSize(rng, 0, 28))) % 30;
    DeterministicBackend backend;
    MaxFlowResult r = RunMaxFlow(g, s, t, backend);
    FlowOracleResult o = OracleMaxFlow(g, s, t);
    EXPECT_EQ(r.value, o.value);
    EXPECT_EQ(r.cut_capacity, r.value);
    EXPECT_EQ(o.cut_capacity, o.value);
  }
}

TEST(MaxFlowTest, UndirectedEdgesCarryFlowBothWays) {
  Graph g({0, 1, 2}, {{1, 0, 4.0, {}}, {2, 1, 3.0, {}}}, false, true);
  DeterministicBackend backend;
  EXPECT_EQ(RunMaxFlow(g, 0, 2, backend).value, 3.0);
  EXPECT_EQ(OracleMaxFlow(g, 0, 2).value, 3.0);
}

TEST(MaxFlowTest, Errors) {
  Graph g({0, 1}, {{0, 1, 1.0, {}}}, true, true);
  DeterministicBackend backend;
  try {
    RunMaxFlow(g, 0, 0, backend);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSourceEqualsSink);
  }
  try {
    RunMaxFlow(g, 0, 5, backend);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownNode);
  }
}

TEST(MaxFlowTest, DisconnectedSinkHasZeroFlow) {
  Graph g({0, 1, 2}, {{0, 1, 5.0, {}}}, true, true);
  DeterministicBackend backend;
  MaxFlowResult r = RunMaxFlow(g, 0, 2, backend);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.augmentations, 0u);
}

}  // namespace
}  // namespace nodeagent
