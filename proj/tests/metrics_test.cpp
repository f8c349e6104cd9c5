// Copyright 2026 The popnet Authors.
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "popnet/bn_io.hpp"
#include "popnet/metrics.hpp"
#include "test_support.hpp"

namespace popnet {
namespace {

TEST(GraphStatistics, AgreeWithReferenceOnRandomGraphs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 0;
    auto edges = testing::random_graph(rng, 300, n);
    NetworkStats s = graph_statistics(UndirectedGraph(n, edges));
    auto ref = testing::reference_statistics(n, edges);
    EXPECT_EQ(s.nodes, n);
    EXPECT_EQ(s.links, ref.links);
    EXPECT_DOUBLE_EQ(s.density, ref.density);
    EXPECT_DOUBLE_EQ(s.average_degree, ref.average_degree);
    EXPECT_DOUBLE_EQ(s.clustering, ref.clustering);
    EXPECT_EQ(s.components, ref.components);
    EXPECT_EQ(s.largest_component, ref.largest_component);
    ASSERT_EQ(s.average_path_length.has_value(), ref.has_path_length);
    if (ref.has_path_length) {
      EXPECT_NEAR(*s.average_path_length, ref.average_path_length, 1e-9);
      EXPECT_FALSE(s.path_length_estimated);
    }
  }
}

TEST(GraphStatistics, CompleteGraphOfFive) {
  testing::EdgeList edges;
  for (std::uint32_t a = 0; a < 5; ++a)
    for (std::uint32_t b = a + 1; b < 5; ++b) edges.emplace_back(a, b);
  NetworkStats s = graph_statistics(UndirectedGraph(5, edges));
  EXPECT_EQ(s.links, 10u);
  EXPECT_DOUBLE_EQ(s.density, 1.0);
  EXPECT_DOUBLE_EQ(s.average_degree, 4.0);
  EXPECT_DOUBLE_EQ(s.clustering, 1.0);
  EXPECT_DOUBLE_EQ(*s.average_path_length, 1.0);
}

TEST(GraphStatistics, EmptyAndEdgelessGraphs) {
  NetworkStats none = graph_statistics(UndirectedGraph{});
  EXPECT_EQ(none.nodes, 0u);
  EXPECT_EQ(none.components, 0u);
  EXPECT_FALSE(none.average_path_length);
  NetworkStats isolated = graph_statistics(UndirectedGraph(7, testing::EdgeList{}));
  EXPECT_EQ(isolated.components, 7u);
  EXPECT_EQ(isolated.largest_component, 1u);
  EXPECT_DOUBLE_EQ(isolated.density, 0.0);
  EXPECT_DOUBLE_EQ(isolated.clustering, 0.0);
  EXPECT_FALSE(isolated.average_path_length);
}

TEST(GraphStatistics, SampledPathLengthIsClose) {
  std::mt19937_64 rng(5);
  std::size_t n = 3000;
  testing::EdgeList edges;
  std::uniform_int_distribution<std::uint32_t> pick(0, 2999);
  for (std::uint32_t u = 1; u < n; ++u) edges.emplace_back(u, pick(rng) % u);
  for (int i = 0; i < 3000; ++i) edges.emplace_back(pick(rng), pick(rng));
  UndirectedGraph g(n, edges);
  NetworkStats exact = graph_statistics(g, 1);
  NetworkStats sampled = graph_statistics(g, 1, 1000, 300);
  EXPECT_FALSE(exact.path_length_estimated);
  EXPECT_TRUE(sampled.path_length_estimated);
  EXPECT_NEAR(*sampled.average_path_length, *exact.average_path_length,
              0.05 * *exact.average_path_length);
  NetworkStats again = graph_statistics(g, 1, 1000, 300);
  EXPECT_EQ(*again.average_path_length, *sampled.average_path_length);
}

TEST(GraphStatistics, PopulationViewsCollapseDirections) {
  BayesianNetwork bn = parse_bn("variable g { m, f }\ncpt g { 0.5, 0.5 }\n");
  PopulationStore store(bn, {{"motherOf", true}, {"friendship", false}});
  for (int i = 0; i < 4; ++i) store.add_agent({i % 2});
  store.record_link(0, 1, 0, CountedEndpoints::Source);
  store.record_link(2, 0, 0, CountedEndpoints::Source);
  store.record_link(1, 2, 1, CountedEndpoints::Both);
  NetworkStats all = graph_statistics(store);
  EXPECT_EQ(all.links, 3u);
  EXPECT_EQ(all.triangles, 1u);
  EXPECT_EQ(all.components, 2u);
  NetworkStats mothers = graph_statistics(store, LinkTypeId{0});
  EXPECT_EQ(mothers.links, 2u);
  EXPECT_DOUBLE_EQ(mothers.clustering, 0.0);
  EXPECT_DOUBLE_EQ(*mothers.average_path_length, 8.0 / 6.0);
}

TEST(MatchingError, PoolsRulesOfOneType) {
  RuleReport a{"spouses", RuleKind::Homophily, 7, 10, 3};
  RuleReport b{"spouses", RuleKind::Homophily, 5, 10, 5};
  RuleReport c{"fatherOf", RuleKind::Transitive, 4, 9, 0};
  RuleReport d{"friendship", RuleKind::Homophily, 0, 0, 0};
  auto e = matching_error({a, b, c, d});
  EXPECT_DOUBLE_EQ(e.at("spouses"), 0.4);
  EXPECT_FALSE(e.contains("fatherOf"));
  EXPECT_DOUBLE_EQ(e.at("friendship"), 0.0);
}

}  // namespace
}  // namespace popnet
