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
#include <cmath>
#include <random>
#include <set>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"
#include "popnet/transitivity.hpp"
#include "test_support.hpp"

namespace popnet {
namespace {

const std::vector<LinkType> kTypes{
    {"spouses", false}, {"motherOf", true}, {"fatherOf", true}, {"siblings", false}};

PopulationStore blank_population(std::size_t n) {
  BayesianNetwork bn = parse_bn("variable g { m, f }\ncpt g { 0.5, 0.5 }\n");
  PopulationStore store(bn, kTypes);
  for (std::size_t i = 0; i < n; ++i) store.add_agent({static_cast<int>(i % 2)});
  return store;
}

// Random links of the first two types with density `p` per dyad.
PopulationStore random_links(std::size_t n, double p, std::uint64_t seed) {
  PopulationStore store = blank_population(n);
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(p);
  for (AgentId a = 0; a < n; ++a)
    for (AgentId b = 0; b < n; ++b)
      if (a != b && coin(gen)) store.record_link(a, b, gen() % 2, CountedEndpoints::None);
  return store;
}

// Does x hold role `r` relative to the pivot in a link of type t? Roles are
// those of the pivot, so Source means pivot -> x.
bool plays(const PopulationStore& s, LinkTypeId t, PivotRole r, AgentId pivot, AgentId x) {
  auto l = s.link_between(pivot, x);
  if (!l || l->type != t) return false;
  if (!s.link_types()[t].directed || r == PivotRole::Any) return true;
  return r == PivotRole::Source ? l->source == pivot : l->target == pivot;
}

std::vector<Dyad> brute_force(const PopulationStore& s, const TransitivityRule& rule) {
  LinkTypeId t1 = s.link_type_id(rule.first_type), t2 = s.link_type_id(rule.second_type);
  bool undirected = !s.link_types()[s.link_type_id(rule.closing_type)].directed;
  std::set<Dyad> out;
  AgentId n = static_cast<AgentId>(s.size());
  for (AgentId a1 = 0; a1 < n; ++a1)
    for (AgentId a2 = 0; a2 < n; ++a2)
      for (AgentId a3 = 0; a3 < n; ++a3) {
        if (a1 == a3 || a1 == a2 || a2 == a3 || s.linked(a1, a3)) continue;
        if (!plays(s, t1, rule.pivot_in_first, a2, a1)) continue;
        if (!plays(s, t2, rule.pivot_in_second, a2, a3)) continue;
        out.insert(undirected ? Dyad{std::min(a1, a3), std::max(a1, a3)} : Dyad{a1, a3});
      }
  return {out.begin(), out.end()};
}

TEST(EnumerateOpenTriads, MatchesCubicEnumeration) {
  std::vector<TransitivityRule> rules{
      {"fatherOf", "spouses", "motherOf", 1.0, PivotRole::Any, PivotRole::Source},
      {"siblings", "motherOf", "motherOf", 1.0, PivotRole::Source, PivotRole::Source},
      {"siblings", "spouses", "spouses", 1.0, PivotRole::Any, PivotRole::Any},
      {"fatherOf", "motherOf", "spouses", 1.0, PivotRole::Target, PivotRole::Any},
      {"fatherOf", "motherOf", "motherOf", 1.0, PivotRole::Any, PivotRole::Target}};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    PopulationStore store = random_links(40, 0.06, seed);
    for (const auto& rule : rules) {
      auto expected = brute_force(store, rule);
      EXPECT_EQ(enumerate_open_triads_serial(store, rule), expected);
      EXPECT_EQ(enumerate_open_triads(store, rule), expected);
    }
  }
}

TEST(CheckRule, RejectsBadRules) {
  PopulationStore store = blank_population(3);
  EXPECT_THROW(check_rule(store, {"fatherOf", "spouses", "motherOf", 1.0, PivotRole::Source,
                                  PivotRole::Source}),
               Error);
  EXPECT_THROW(check_rule(store, {"uncleOf", "spouses", "motherOf"}), Error);
  EXPECT_THROW(check_rule(store, {"fatherOf", "spouses", "motherOf", 1.5}), Error);
  EXPECT_THROW(parse_pivot_role("from"), Error);
  EXPECT_EQ(pivot_role_name(parse_pivot_role("dst")), "dst");
}

TEST(RunTransitivityRule, CertainRuleClosesEverything) {
  PopulationStore store = random_links(60, 0.05, 3);
  TransitivityRule rule{"fatherOf", "spouses", "motherOf", 1.0, PivotRole::Any,
                        PivotRole::Source};
  auto dyads = enumerate_open_triads(store, rule);
  // A directed closing type can list both orders of one dyad; only the first
  // closed takes it.
  std::size_t reversed = 0;
  for (const Dyad& d : dyads)
    reversed += d.first < d.second &&
                std::binary_search(dyads.begin(), dyads.end(), Dyad{d.second, d.first});
  ASSERT_GT(reversed, 0u);
  RandomStream rng(1);
  RuleReport r = run_transitivity_rule(store, rule, rng);
  EXPECT_EQ(r.kind, RuleKind::Transitive);
  EXPECT_EQ(r.required, dyads.size());
  EXPECT_EQ(r.created, dyads.size() - reversed);
  EXPECT_TRUE(enumerate_open_triads(store, rule).empty());
}

TEST(RunTransitivityRule, ImpossibleRuleClosesNothing) {
  PopulationStore store = random_links(60, 0.05, 4);
  std::size_t before = store.links().size();
  TransitivityRule rule{"siblings", "motherOf", "motherOf", 0.0, PivotRole::Source,
                        PivotRole::Source};
  RandomStream rng(1);
  RuleReport r = run_transitivity_rule(store, rule, rng);
  EXPECT_EQ(r.created, 0u);
  EXPECT_GT(r.required, 0u);
  EXPECT_EQ(store.links().size(), before);
}

TEST(RunTransitivityRule, HalfProbabilityIsBinomial) {
  // One mother with 46 children gives 1035 sibling dyads.
  PopulationStore store = blank_population(47);
  for (AgentId c = 1; c < 47; ++c)
    store.record_link(0, c, store.link_type_id("motherOf"), CountedEndpoints::None);
  TransitivityRule rule{"siblings", "motherOf", "motherOf", 0.5, PivotRole::Source,
                        PivotRole::Source};
  ASSERT_EQ(enumerate_open_triads(store, rule).size(), 1035u);
  RandomStream rng(12);
  RuleReport r = run_transitivity_rule(store, rule, rng);
  EXPECT_EQ(r.required, 1035u);
  EXPECT_NEAR(static_cast<double>(r.created), 517.5, 3 * std::sqrt(1035 * 0.25));
  EXPECT_EQ(store.link_count(store.link_type_id("siblings")), r.created);
}

TEST(RunTransitivityRule, NeverOverwritesAnExistingDyad) {
  PopulationStore store = random_links(50, 0.08, 5);
  std::vector<Link> before = store.links();
  RandomStream rng(2);
  run_transitivity_rule(store,
                        {"siblings", "spouses", "spouses", 1.0, PivotRole::Any, PivotRole::Any},
                        rng);
  for (std::size_t i = 0; i < before.size(); ++i) {
    EXPECT_EQ(store.links()[i].source, before[i].source);
    EXPECT_EQ(store.links()[i].type, before[i].type);
  }
}

}  // namespace
}  // namespace popnet
