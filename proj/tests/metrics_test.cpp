#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "kcollapse/metrics.hpp"
#include "oracles.hpp"

using namespace kcollapse;

namespace {

struct Fixture {
  Graph graph;
  GraphView view;
  CoreIndex index;

  explicit Fixture(Graph g) : graph(std::move(g)), view(graph), index(compute_cores(view)) {}
  Fixture(const Fixture&) = delete;
};

// Two K4s {0..3} and {4..7}; node 8 joins 0,1,2 and 4,5: core 3, five supporters.
Graph strength_three() {
  return oracle::from_pairs(9, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {4, 7}, {5, 6},
                                {5, 7}, {6, 7}, {8, 0}, {8, 1}, {8, 2}, {8, 4}, {8, 5}});
}

// K5 on 0..4, K4 on 5..8, node 9 joined to K5 node 0 and to 5, 6, 7.
// Node 9: C=3, CS=2. Node 0: C=4, CS=1.
Graph mixed_levels() {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < 5; ++u)
    for (NodeId v = u + 1; v < 5; ++v) pairs.emplace_back(u, v);
  for (NodeId u = 5; u < 9; ++u)
    for (NodeId v = u + 1; v < 9; ++v) pairs.emplace_back(u, v);
  for (NodeId v : {0u, 5u, 6u, 7u}) pairs.emplace_back(9, v);
  return oracle::from_pairs(10, pairs);
}

Graph two_cycles() {
  return oracle::from_pairs(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 5}});
}

Graph random_graph(std::uint64_t seed) {
  const NodeId n = static_cast<NodeId>(6 + seed % 25);
  const double p = std::vector<double>{0.15, 0.3, 0.5}[seed % 3];
  return oracle::erdos_renyi(n, p, seed);
}

}  // namespace

TEST(SupportiveNeighbors, Fixtures) {
  Fixture f(oracle::k4_pendant());
  EXPECT_EQ(supportive_neighbors(f.view, f.index, 4, 1), (std::vector<NodeId>{0}));
  EXPECT_EQ(supportive_neighbors(f.view, f.index, 0, 3), (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(supportive_count(f.view, f.index, 0, 1), 4u);
}

TEST(CoreStrength, Fixtures) {
  Fixture k4(oracle::complete(4));
  for (NodeId i = 0; i < 4; ++i) EXPECT_EQ(core_strength(k4.view, k4.index, i), 1u);
  Fixture c5(oracle::cycle(5));
  for (NodeId i = 0; i < 5; ++i) EXPECT_EQ(core_strength(c5.view, c5.index, i), 1u);
  Fixture s3(strength_three());
  EXPECT_EQ(s3.index.core[8], 3u);
  EXPECT_EQ(core_strength(s3.view, s3.index, 8), 3u);
}

TEST(CoreStrength, UndefinedAtCoreZero) {
  Fixture f(oracle::from_pairs(3, {{0, 1}}));
  EXPECT_THROW(core_strength(f.view, f.index, 2), InvalidArgument);
}

TEST(CoreStrength, MatchesOracleOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Fixture f(random_graph(seed));
    const auto truth = oracle::strengths(f.graph.node_count(), oracle::edge_set(f.graph));
    for (NodeId i = 0; i < f.graph.node_count(); ++i)
      if (f.index.core[i] > 0) EXPECT_EQ(core_strength(f.view, f.index, i), truth[i]);
  }
}

TEST(StrengthCache, StaysCurrentAcrossCascades) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_graph(seed);
    GraphView view(g);
    auto index = compute_cores(view);
    StrengthCache cache(view, index);
    for (NodeId i = 0; i < g.node_count(); ++i) cache(i);
    std::vector<EdgeId> order(g.edge_count());
    for (EdgeId id = 0; id < order.size(); ++id) order[id] = id;
    std::shuffle(order.begin(), order.end(), rng);
    for (EdgeId id : order) {
      cache.invalidate(cascade_after_removal(view, index, id));
      for (NodeId i = 0; i < g.node_count(); ++i) ASSERT_EQ(cache(i), detail::raw_strength(view, index, i));
    }
  }
}

TEST(CoronaNodes, Fixtures) {
  Fixture k4(oracle::complete(4));
  EXPECT_EQ(corona_nodes(k4.view, k4.index, 3), (std::vector<NodeId>{0, 1, 2, 3}));
  Fixture c5(oracle::cycle(5));
  EXPECT_EQ(corona_nodes(c5.view, c5.index, 2).size(), 5u);
  Fixture k5(oracle::complete(5));
  EXPECT_EQ(corona_nodes(k5.view, k5.index, 4).size(), 5u);
}

TEST(CoronaNodes, FiveCliquePlusUniversalNode) {
  // Adding a node adjacent to all of K5 yields K6: everything moves to core 5.
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < 5; ++u)
    for (NodeId v = u + 1; v < 5; ++v) pairs.emplace_back(u, v);
  for (NodeId u = 0; u < 5; ++u) pairs.emplace_back(u, 5);
  Fixture f(oracle::from_pairs(6, pairs));
  const auto cs = oracle::strengths(6, oracle::edge_set(f.graph));
  const auto core = oracle::cores(f.graph);
  for (CoreValue k : {4u, 5u}) {
    std::vector<NodeId> expected;
    for (NodeId i = 0; i < 6; ++i)
      if (core[i] == k && cs[i] == 1) expected.push_back(i);
    EXPECT_EQ(corona_nodes(f.view, f.index, k), expected) << "k=" << k;
  }
  EXPECT_TRUE(corona_nodes(f.view, f.index, 4).empty());
}

TEST(CoronaPedigree, Fixtures) {
  Fixture k4(oracle::complete(4));
  auto p = corona_pedigree(k4.view, k4.index, 0);
  EXPECT_EQ(p.k, 3u);
  EXPECT_EQ(p.members, (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_EQ(p.incident_edges.size(), 6u);

  Fixture cycles(two_cycles());
  EXPECT_EQ(corona_pedigree(cycles.view, cycles.index, 2).members, (std::vector<NodeId>{0, 1, 2, 3, 4}));
  EXPECT_EQ(corona_pedigree(cycles.view, cycles.index, 7).members, (std::vector<NodeId>{5, 6, 7, 8, 9}));
}

TEST(CoronaPedigree, SingletonPedigree) {
  Fixture f(oracle::k4_pendant());
  auto p = corona_pedigree(f.view, f.index, 4);
  EXPECT_EQ(p.k, 1u);
  EXPECT_EQ(p.members, (std::vector<NodeId>{4}));
  EXPECT_EQ(p.incident_edges, (std::vector<Edge>{Edge::make(0, 4)}));
}

TEST(CoronaPedigree, IncidentEdgesLeadIntoTheCore) {
  // A path 4-5 hangs off the K4 at node 0; the edge 0-4 leads out of the 3-core.
  Fixture f(oracle::from_pairs(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}, {4, 5}}));
  auto p = corona_pedigree(f.view, f.index, 0);
  EXPECT_EQ(p.members, (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_EQ(p.incident_edges.size(), 6u);
  for (const Edge& e : p.incident_edges) EXPECT_NE(e, Edge::make(0, 4));
}

TEST(CoronaPedigree, RejectsNonCorona) {
  Fixture s3(strength_three());
  EXPECT_THROW(corona_pedigree(s3.view, s3.index, 8), InvalidArgument);
  Fixture iso(oracle::from_pairs(3, {{0, 1}}));
  EXPECT_THROW(corona_pedigree(iso.view, iso.index, 2), InvalidArgument);
}

TEST(CoronaPedigree, PedigreesPartitionTheCoronaSet) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Fixture f(random_graph(seed));
    for (CoreValue k = 1; k <= f.index.max_core; ++k) {
      auto coronas = corona_nodes(f.view, f.index, k);
      std::set<NodeId> seen;
      for (NodeId u : coronas) {
        if (seen.count(u)) continue;
        auto p = corona_pedigree(f.view, f.index, u);
        for (NodeId m : p.members) {
          EXPECT_TRUE(seen.insert(m).second) << "node in two pedigrees";
          EXPECT_EQ(f.index.core[m], k);
          EXPECT_EQ(core_strength(f.view, f.index, m), 1u);
        }
        // Maximal: no corona neighbor of a member at the same k is left out.
        for (NodeId m : p.members)
          for (NodeId j : f.graph.neighbors(m))
            if (f.index.core[j] == k && core_strength(f.view, f.index, j) == 1) EXPECT_TRUE(p.contains(j));
      }
      EXPECT_EQ(seen, std::set<NodeId>(coronas.begin(), coronas.end()));
    }
  }
}

TEST(CoronaPedigree, EveryIncidentEdgeCollapsesEveryMember) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Fixture f(random_graph(seed));
    for (CoreValue k = 1; k <= f.index.max_core; ++k) {
      std::set<NodeId> seen;
      for (NodeId u : corona_nodes(f.view, f.index, k)) {
        if (seen.count(u)) continue;
        auto p = corona_pedigree(f.view, f.index, u);
        seen.insert(p.members.begin(), p.members.end());
        for (const Edge& e : p.incident_edges) {
          auto collapsed = oracle::collapsed_after(f.graph, {{e.u, e.v}});
          for (NodeId m : p.members) EXPECT_TRUE(collapsed.count(m)) << "seed " << seed << " edge " << to_string(e);
        }
      }
    }
  }
}

TEST(CandidateEdges, Fixtures) {
  Fixture k4(oracle::complete(4));
  EXPECT_EQ(candidate_edges(k4.view, k4.index, 3).size(), 6u);
  Fixture kp(oracle::k4_pendant());
  EXPECT_EQ(candidate_edges(kp.view, kp.index, 1), (std::vector<Edge>{Edge::make(0, 4)}));
  auto top = candidate_edges(kp.view, kp.index, 3);
  EXPECT_EQ(top.size(), 6u);
  for (const Edge& e : top) EXPECT_FALSE(e.touches(4));
}

TEST(SingleEdgeCheck, Fixtures) {
  Fixture k4(oracle::complete(4));
  for (const Edge& e : k4.graph.edges()) EXPECT_TRUE(single_edge_collapse_check(k4.view, k4.index, e));

  Fixture mixed(mixed_levels());
  ASSERT_EQ(mixed.index.core[9], 3u);
  ASSERT_EQ(core_strength(mixed.view, mixed.index, 9), 2u);
  ASSERT_EQ(mixed.index.core[0], 4u);
  ASSERT_EQ(core_strength(mixed.view, mixed.index, 0), 1u);
  EXPECT_FALSE(single_edge_collapse_check(mixed.view, mixed.index, Edge::make(0, 9)));
  EXPECT_TRUE(oracle::collapsed_after(mixed.graph, {{0, 9}}).empty());
}

TEST(SingleEdgeCheck, StrongEndpointsNeverCollapse) {
  auto g = strength_three();
  Fixture f(g);
  for (const Edge& e : g.edges()) {
    const auto a = core_strength(f.view, f.index, e.u), b = core_strength(f.view, f.index, e.v);
    if (std::min(a, b) >= 2) EXPECT_FALSE(single_edge_collapse_check(f.view, f.index, e));
  }
  EXPECT_EQ(core_strength(f.view, f.index, 8), 3u);
}

TEST(SingleEdgeCheck, AgreesWithRemovalOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Fixture f(random_graph(seed));
    for (const Edge& e : f.graph.edges()) {
      const bool truth = !oracle::collapsed_after(f.graph, {{e.u, e.v}}).empty();
      EXPECT_EQ(single_edge_collapse_check(f.view, f.index, e), truth) << "seed " << seed << " " << to_string(e);
    }
  }
}

TEST(Support, OneWayAcrossLevelsMutualWithin) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Fixture f(random_graph(seed));
    for (const Edge& e : f.graph.edges()) {
      auto sn_u = supportive_neighbors(f.view, f.index, e.u, f.index.core[e.u]);
      auto sn_v = supportive_neighbors(f.view, f.index, e.v, f.index.core[e.v]);
      const bool v_supports_u = std::binary_search(sn_u.begin(), sn_u.end(), e.v);
      const bool u_supports_v = std::binary_search(sn_v.begin(), sn_v.end(), e.u);
      const auto cu = f.index.core[e.u], cv = f.index.core[e.v];
      if (cu > cv) {
        EXPECT_TRUE(u_supports_v);
        EXPECT_FALSE(v_supports_u);
      } else if (cu < cv) {
        EXPECT_TRUE(v_supports_u);
        EXPECT_FALSE(u_supports_v);
      } else {
        EXPECT_TRUE(u_supports_v && v_supports_u);
      }
    }
  }
}

TEST(Support, CuttingCoreStrengthManySupportersAlwaysCollapses) {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Fixture f(random_graph(seed));
    for (NodeId i = 0; i < f.graph.node_count(); ++i) {
      if (f.index.core[i] == 0) continue;
      auto sn = supportive_neighbors(f.view, f.index, i, f.index.core[i]);
      std::shuffle(sn.begin(), sn.end(), rng);
      sn.resize(core_strength(f.view, f.index, i));
      oracle::EdgeSet cut;
      for (NodeId j : sn) cut.insert(oracle::canon(i, j));
      EXPECT_TRUE(oracle::collapsed_after(f.graph, cut).count(i));
    }
  }
}
