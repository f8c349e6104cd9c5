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

#include <algorithm>
#include <random>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"
#include "popnet/export.hpp"
#include "popnet/report.hpp"
#include "test_support.hpp"

namespace popnet {
namespace fs = std::filesystem;
namespace {

PopulationStore small_network() {
  BayesianNetwork bn = parse_bn(R"(
variable gender { male, female }
variable RC_friendship { 0, 1 }
cpt gender { 0.5, 0.5 }
cpt RC_friendship | gender {
  male : 0.5, 0.5
  female : 0.5, 0.5
}
)");
  PopulationStore store(bn, {{"motherOf", true}, {"friendship", false}, {"unused", false}});
  for (int i = 0; i < 5; ++i) store.add_agent({i % 2, i % 2});
  store.record_link(3, 0, 0, CountedEndpoints::Source);
  store.record_link(4, 2, 1, CountedEndpoints::Both);
  store.record_link(1, 0, 1, CountedEndpoints::Both);
  store.record_link(1, 4, 0, CountedEndpoints::Source);
  return store;
}

TEST(CanonicalEdges, SortedByTypeThenIds) {
  auto edges = canonical_edges(small_network());
  std::vector<EdgeRecord> expected{
      {0, 1, "friendship"}, {2, 4, "friendship"}, {1, 4, "motherOf"}, {3, 0, "motherOf"}};
  EXPECT_EQ(edges, expected);
}

TEST(AgentsCsv, HeaderAndLabels) {
  EXPECT_EQ(agents_csv(small_network()),
            "id,gender,RC_friendship\n0,male,0\n1,female,1\n2,male,0\n3,female,1\n4,male,0\n");
}

TEST(EdgesCsv, PerTypeAndCombined) {
  PopulationStore store = small_network();
  EXPECT_EQ(edges_csv(store, 0), "source,target\n1,4\n3,0\n");
  EXPECT_EQ(edges_csv(store, 2), "source,target\n");
  EXPECT_EQ(all_edges_csv(store),
            "source,target,type\n0,1,friendship\n2,4,friendship\n1,4,motherOf\n3,0,motherOf\n");
}

TEST(GraphDescription, MixedDirections) {
  std::string dot = graph_description(small_network());
  EXPECT_TRUE(dot.starts_with("digraph network {\n"));
  EXPECT_NE(dot.find("  3 -> 0 [type=\"motherOf\"];\n"), std::string::npos);
  EXPECT_NE(dot.find("  0 -> 1 [type=\"friendship\", dir=none];\n"), std::string::npos);
}

TEST(GraphDescription, UndirectedOnly) {
  BayesianNetwork bn = parse_bn("variable g { m }\ncpt g { 1 }\n");
  PopulationStore store(bn, {{"friendship", false}});
  store.add_agent({0});
  store.add_agent({0});
  store.record_link(1, 0, 0, CountedEndpoints::None);
  EXPECT_EQ(graph_description(store),
            "graph network {\n  0;\n  1;\n  0 -- 1 [type=\"friendship\"];\n}\n");
}

TEST(InteractionCsv, WeightsPerLink) {
  PopulationStore store = small_network();
  EXPECT_EQ(interaction_csv(store, {{"motherOf", 0.8}, {"friendship", 0.25}}),
            "source,target,probability\n0,1,0.25\n2,4,0.25\n1,4,0.8\n3,0,0.8\n");
  EXPECT_THROW(interaction_csv(store, {{"motherOf", 0.8}}), Error);
  EXPECT_THROW(interaction_csv(store, {{"motherOf", 1.2}, {"friendship", 0.1}}), Error);
}

TEST(ExportNetwork, FilesRoundTrip) {
  PopulationStore store = small_network();
  fs::path dir = testing::scratch_dir("export_round_trip");
  auto written = export_network(store, dir);
  EXPECT_EQ(written.size(), 6u);
  EXPECT_TRUE(fs::exists(dir / "edges_unused.csv"));
  EXPECT_TRUE(fs::exists(dir / "network.dot"));
  ExportedNetwork back = read_exported_network(dir);
  EXPECT_EQ(back.agents, 5u);
  EXPECT_EQ(back.types, (std::vector<std::string>{"friendship", "motherOf", "unused"}));
  EXPECT_EQ(back.edges, canonical_edges(store));
  EXPECT_EQ(parse_edges_csv(read_text_file(dir / "edges_motherOf.csv"), "motherOf"),
            (std::vector<EdgeRecord>{{1, 4, "motherOf"}, {3, 0, "motherOf"}}));
}

TEST(ExportNetwork, NoGraphDescriptionForLargePopulations) {
  BayesianNetwork bn = parse_bn("variable g { m }\ncpt g { 1 }\n");
  PopulationStore store(bn, {{"friendship", false}});
  for (std::size_t i = 0; i <= kGraphDescriptionLimit; ++i) store.add_agent({0});
  fs::path dir = testing::scratch_dir("export_large");
  export_network(store, dir);
  EXPECT_FALSE(fs::exists(dir / "network.dot"));
}

TEST(ExportNetwork, UnwritableDirectoryThrows) {
  fs::path file = testing::scratch_dir("export_blocked") / "file";
  write_text_file(file, "x");
  EXPECT_THROW(export_network(small_network(), file / "sub"), Error);
}

TEST(ParseEdges, RejectsMalformedRows) {
  EXPECT_THROW(parse_all_edges_csv("from,to\n"), ParseError);
  EXPECT_THROW(parse_all_edges_csv("source,target,type\n1,x,friendship\n"), ParseError);
  EXPECT_THROW(parse_edges_csv("source,target\n1,2,3\n", "t"), ParseError);
}

TEST(Report, RoundTripsExactly) {
  std::mt19937_64 gen(3);
  GenerationReport r;
  r.population = 10000;
  r.seed = 2026;
  r.rules.push_back({"spouses", RuleKind::Homophily, 1800, 1900, 100, 90, 1500, 300, 42, false});
  r.rules.push_back({"fatherOf", RuleKind::Transitive, 3000, 3000, 0, 0, 0, 0, 0, false});
  r.rules.push_back({"never", RuleKind::Homophily, 0, 20, 20, 10, 0, 0, 0, true});
  r.errors.distribution = {1.0 / 3.0, 120, 7};
  r.errors.matching = {{"spouses", 100.0 / 1900.0}, {"never", 1.0}};
  r.collapsed.nodes = 10000;
  r.collapsed.links = 31234;
  r.collapsed.density = 6.2474247e-4;
  r.collapsed.average_degree = 6.2468;
  r.collapsed.clustering = 0.2140731;
  r.collapsed.triangles = 12345;
  r.collapsed.connected_triples = 173005;
  r.collapsed.components = 14;
  r.collapsed.largest_component = 9950;
  r.collapsed.average_path_length = 5.507261;
  r.per_type["spouses"].nodes = 10000;
  r.per_type["never"] = {};
  GenerationReport back = parse_report(format_report(r));
  EXPECT_EQ(format_report(back), format_report(r));
  EXPECT_EQ(back.rules, r.rules);
  EXPECT_EQ(back.errors.distribution.mean_absolute_error, 1.0 / 3.0);
  EXPECT_EQ(back.errors.matching, r.errors.matching);
  EXPECT_EQ(back.collapsed.average_path_length, r.collapsed.average_path_length);
  EXPECT_FALSE(back.per_type.at("never").average_path_length);
  EXPECT_EQ(back.per_type.size(), 2u);
}

TEST(Report, KeysAreStable) {
  GenerationReport r;
  r.rules.push_back({"spouses", RuleKind::Homophily, 1, 2, 1, 1, 1, 0, 0, false});
  auto kv = parse_key_values(format_report(r));
  for (const char* key :
       {"population.size", "population.seed", "rules.count", "rule.0.kind", "rule.0.type",
        "rule.0.created", "rule.0.unfulfilled", "error.distribution",
        "stats.all.clustering", "stats.all.average_path_length"})
    EXPECT_TRUE(kv.contains(key)) << key;
  EXPECT_EQ(kv["stats.all.average_path_length"], "absent");
  EXPECT_THROW(parse_report("population.size=ten\n"), Error);
}

}  // namespace
}  // namespace popnet
