#include <gtest/gtest.h>

#include "metacd/graph.hpp"
#include "metacd/rng.hpp"
#include "oracles.hpp"

using namespace metacd;

namespace {

HasnGraph path3() {
  return HasnGraph::build({NodeKind::Human, NodeKind::Human, NodeKind::Human},
                          {{0, 1, 1.0}, {1, 2, 1.0}});
}

HasnGraph triangle() {
  return HasnGraph::build({NodeKind::Human, NodeKind::Human, NodeKind::Human},
                          {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

}  // namespace

TEST(BuildGraph, PathCounts) {
  const HasnGraph g = path3();
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_DOUBLE_EQ(g.degree(1), 2.0);
  EXPECT_DOUBLE_EQ(g.total_weight(), 4.0);
  EXPECT_EQ(g.human_count(), 3u);
  EXPECT_EQ(g.ai_count(), 0u);
}

TEST(BuildGraph, SingleNodeNoEdges) {
  const HasnGraph g = HasnGraph::build({NodeKind::Human}, {});
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_DOUBLE_EQ(g.degree(0), 0.0);
}

TEST(BuildGraph, TriangleDegrees) {
  const HasnGraph g = triangle();
  for (NodeId v = 0; v < 3; ++v) EXPECT_DOUBLE_EQ(g.degree(v), 2.0);
}

TEST(BuildGraph, RejectsDuplicateEdge) {
  EXPECT_THROW(HasnGraph::build({NodeKind::Human, NodeKind::Human},
                                {{0, 1, 1.0}, {1, 0, 2.0}}),
               std::invalid_argument);
}

TEST(BuildGraph, RejectsUnknownNode) {
  EXPECT_THROW(HasnGraph::build({NodeKind::Human, NodeKind::Human}, {{0, 7, 1.0}}),
               std::invalid_argument);
}

TEST(BuildGraph, RejectsSelfLoopAndBadWeight) {
  EXPECT_THROW(HasnGraph::build({NodeKind::Human}, {{0, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(HasnGraph::build({NodeKind::Human, NodeKind::Human}, {{0, 1, 0.0}}),
               std::invalid_argument);
  EXPECT_THROW(HasnGraph::build({NodeKind::Human, NodeKind::Human}, {{0, 1, -2.0}}),
               std::invalid_argument);
}

TEST(RemoveNode, StarCenterLeavesIsolatedLeaves) {
  const HasnGraph star = HasnGraph::build(
      {NodeKind::Human, NodeKind::Human, NodeKind::Human, NodeKind::Human},
      {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  const HasnGraph g = star.removed(0);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_FALSE(g.contains(0));
  for (NodeId v = 1; v < 4; ++v) {
    EXPECT_TRUE(g.contains(v));
    EXPECT_DOUBLE_EQ(g.degree(v), 0.0);
  }
}

TEST(RemoveNode, TriangleLeavesSingleEdge) {
  const HasnGraph g = triangle().removed(2);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_DOUBLE_EQ(g.total_weight(), 2.0);
}

TEST(RemoveNode, LastAiDropsAiCountOnly) {
  const HasnGraph g = HasnGraph::build({NodeKind::Human, NodeKind::Human, NodeKind::AI},
                                       {{0, 1, 1.0}, {1, 2, 1.0}});
  const HasnGraph h = g.removed(2);
  EXPECT_EQ(h.ai_count(), 0u);
  EXPECT_EQ(h.human_count(), 2u);
}

TEST(RemoveNode, AbsentNodeNamedInError) {
  try {
    triangle().removed(9);
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("9"), std::string::npos);
  }
}

TEST(RemoveNode, MatchesFreshlyBuiltGraph) {
  Rng rng(99);
  for (int iter = 0; iter < 60; ++iter) {
    const std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.uniform_below(8));
    const HasnGraph g = oracles::random_connected_graph(n, n, rng, false, 0.3);
    const NodeId victim = static_cast<NodeId>(rng.uniform_below(n));
    const HasnGraph removed = g.removed(victim);

    std::vector<NodeKind> kinds;
    std::vector<NodeId> keep;
    std::vector<NodeId> dense_of(g.capacity(), 0);
    for (NodeId v = 0; v < g.capacity(); ++v) {
      if (v == victim) continue;
      dense_of[v] = static_cast<NodeId>(kinds.size());
      kinds.push_back(g.kind(v));
      keep.push_back(v);
    }
    std::vector<EdgeSpec> edges;
    g.for_each_edge([&](NodeId u, NodeId v, double w) {
      if (u != victim && v != victim) edges.push_back({dense_of[u], dense_of[v], w});
    });
    const HasnGraph rebuilt = HasnGraph::build(kinds, edges);
    ASSERT_EQ(removed.node_count(), rebuilt.node_count());
    ASSERT_EQ(removed.edge_count(), rebuilt.edge_count());
    for (NodeId v : keep) {
      EXPECT_DOUBLE_EQ(removed.degree(v), rebuilt.degree(dense_of[v]));
    }
  }
}

TEST(Aggregate, TwoTrianglesWithBridge) {
  // Hand-countable: the two triangles collapse to self-loops of weight 3,
  // the bridge to a single inter-edge of weight 1.
  HasnGraph g = HasnGraph::build(std::vector<NodeKind>(6, NodeKind::Human),
                                 {{0, 1, 1.0},
                                  {1, 2, 1.0},
                                  {0, 2, 1.0},
                                  {3, 4, 1.0},
                                  {4, 5, 1.0},
                                  {3, 5, 1.0},
                                  {2, 3, 1.0}});
  std::vector<std::uint32_t> assignment = {0, 0, 0, 1, 1, 1};
  const Partition p = Partition::from_assignment(g, assignment);
  const HasnGraph agg = g.aggregated(p);
  EXPECT_EQ(agg.node_count(), 2u);
  EXPECT_EQ(agg.edge_count(), 3u);  // two loops and the bridge
  EXPECT_DOUBLE_EQ(agg.self_loop(0), 3.0);
  EXPECT_DOUBLE_EQ(agg.self_loop(1), 3.0);
  EXPECT_TRUE(agg.has_edge(0, 1));
  EXPECT_DOUBLE_EQ(agg.total_weight(), g.total_weight());
  EXPECT_EQ(agg.member_humans(0), 3u);
}

TEST(Aggregate, SingletonPartitionIsIdentity) {
  Rng rng(7);
  const HasnGraph g = oracles::random_connected_graph(9, 6, rng, true, 0.25);
  const HasnGraph agg = g.aggregated(Partition::singletons(g));
  ASSERT_EQ(agg.node_count(), g.node_count());
  ASSERT_EQ(agg.edge_count(), g.edge_count());
  EXPECT_DOUBLE_EQ(agg.total_weight(), g.total_weight());
  for (NodeId v = 0; v < g.capacity(); ++v) {
    EXPECT_DOUBLE_EQ(agg.degree(v), g.degree(v));
    EXPECT_DOUBLE_EQ(agg.self_loop(v), 0.0);
    EXPECT_EQ(agg.member_ais(v), g.kind(v) == NodeKind::AI ? 1u : 0u);
  }
}

TEST(Aggregate, AllInOneCommunity) {
  const HasnGraph g = triangle();
  const HasnGraph agg = g.aggregated(Partition::all_in_one(g));
  EXPECT_EQ(agg.node_count(), 1u);
  EXPECT_EQ(agg.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(agg.self_loop(0), 3.0);
  EXPECT_DOUBLE_EQ(agg.total_weight(), g.total_weight());
}

TEST(Aggregate, PreservesTotalWeightOnRandomGraphs) {
  Rng rng(2024);
  for (int iter = 0; iter < 50; ++iter) {
    const std::uint32_t n = 5 + static_cast<std::uint32_t>(rng.uniform_below(12));
    const HasnGraph g = oracles::random_connected_graph(n, n / 2, rng, false, 0.2);
    const Partition p = oracles::random_partition(g, 1 + n / 3, rng);
    EXPECT_DOUBLE_EQ(g.aggregated(p).total_weight(), g.total_weight());
  }
}

TEST(Aggregate, RejectsPartitionOfDifferentGraph) {
  const HasnGraph g = triangle();
  Partition p;  // empty, covers nothing
  EXPECT_THROW(g.aggregated(p), std::invalid_argument);
}

TEST(Partition, IncrementalStatsMatchScratchAfterMoves) {
  Rng rng(5);
  for (int iter = 0; iter < 40; ++iter) {
    const std::uint32_t n = 6 + static_cast<std::uint32_t>(rng.uniform_below(10));
    // Unit/integer weights: incremental bookkeeping must equal a scratch
    // recompute exactly.
    const HasnGraph g = oracles::random_connected_graph(n, n, rng, true, 0.3);
    Partition p = oracles::random_partition(g, 4, rng);
    for (int move = 0; move < 30; ++move) {
      const NodeId v = static_cast<NodeId>(rng.uniform_below(n));
      p.move_node(g, v, static_cast<std::uint32_t>(rng.uniform_below(6)));
    }
    const Partition scratch = Partition::from_assignment(g, p.assignment());
    for (std::uint32_t c = 0; c < scratch.slot_count(); ++c) {
      EXPECT_EQ(p.stats(c).humans, scratch.stats(c).humans);
      EXPECT_EQ(p.stats(c).ais, scratch.stats(c).ais);
      EXPECT_DOUBLE_EQ(p.stats(c).internal_weight, scratch.stats(c).internal_weight);
      EXPECT_DOUBLE_EQ(p.stats(c).incident_weight, scratch.stats(c).incident_weight);
    }
  }
}

TEST(Partition, RealWeightsStayWithinTolerance) {
  Rng rng(6);
  const HasnGraph g = oracles::random_connected_graph(12, 14, rng, false, 0.25);
  Partition p = oracles::random_partition(g, 3, rng);
  for (int move = 0; move < 60; ++move) {
    p.move_node(g, static_cast<NodeId>(rng.uniform_below(12)),
                static_cast<std::uint32_t>(rng.uniform_below(5)));
  }
  const Partition scratch = Partition::from_assignment(g, p.assignment());
  for (std::uint32_t c = 0; c < scratch.slot_count(); ++c) {
    EXPECT_NEAR(p.stats(c).internal_weight, scratch.stats(c).internal_weight, 1e-12);
    EXPECT_NEAR(p.stats(c).incident_weight, scratch.stats(c).incident_weight, 1e-12);
  }
}

TEST(Partition, NormalizeMakesIndicesContiguous) {
  const HasnGraph g = triangle();
  Partition p = Partition::from_assignment(g, {5, 2, 5});
  p.normalize();
  EXPECT_EQ(p.slot_count(), 2u);
  EXPECT_EQ(p.community_of(0), 0u);
  EXPECT_EQ(p.community_of(1), 1u);
  EXPECT_EQ(p.community_of(2), 0u);
}

TEST(Partition, CoverageValidation) {
  const HasnGraph g = triangle();
  EXPECT_THROW(Partition::from_assignment(g, {0, Partition::kNone, 0}),
               std::invalid_argument);
  EXPECT_THROW(Partition::from_assignment(g, {0, 0}), std::invalid_argument);
}
