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

#include <functional>
#include <random>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"
#include "popnet/matching.hpp"
#include "popnet/metrics.hpp"
#include "test_support.hpp"

namespace popnet {
namespace {

namespace oracle = testing::oracle;

BayesianNetwork kenya() { return load_bn_file(testing::kenya_dir() / "attributes.bn"); }

const std::vector<LinkType> kKenyaTypes{{"spouses", false},  {"motherOf", true},
                                        {"fatherOf", true},  {"siblings", false},
                                        {"friendship", false}, {"colleagues", false}};

PopulationStore kenya_population(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  return generate_population(kenya(), kKenyaTypes, n, rng);
}

// Two sides; only left-right pairs are compatible.
const char* kSidesAttributes = R"(
variable side { left, right }
variable RC_pair { 0, 1 }
cpt side { 0.5, 0.5 }
cpt RC_pair { 0.5, 0.5 }
)";

std::string sides_rule(const char* counts) {
  return std::string("matching pair link=link a1=a1_ a2=a2_ counts=") + counts + R"(
variable a1_side { left, right }
variable a2_side { left, right }
variable link { yes, no }
cpt a1_side { 0.5, 0.5 }
cpt a2_side { 0.5, 0.5 }
cpt link | a1_side, a2_side {
  left, left : 0, 1
  left, right : 1, 0
  right, left : 0, 1
  right, right : 0, 1
}
)";
}

// Size of a maximum bipartite matching by augmenting paths.
std::size_t maximum_matching(std::size_t left, std::size_t right,
                             const std::function<bool(std::size_t, std::size_t)>& edge) {
  std::vector<int> owner(right, -1);
  std::size_t size = 0;
  for (std::size_t u = 0; u < left; ++u) {
    std::vector<bool> seen(right, false);
    std::function<bool(std::size_t)> augment = [&](std::size_t x) {
      for (std::size_t v = 0; v < right; ++v) {
        if (!edge(x, v) || seen[v]) continue;
        seen[v] = true;
        if (owner[v] < 0 || augment(static_cast<std::size_t>(owner[v]))) {
          owner[v] = static_cast<int>(x);
          return true;
        }
      }
      return false;
    };
    if (augment(u)) ++size;
  }
  return size;
}

TEST(HomophilyRule, SupplyShortfallLeavesThreeOfTenUnmatched) {
  BayesianNetwork attrs = parse_bn(kSidesAttributes);
  PopulationStore store(attrs, {{"pair", false}});
  for (int i = 0; i < 10; ++i) store.add_agent({0, 1});
  for (int i = 0; i < 7; ++i) store.add_agent({1, 1});
  HomophilyRule rule = parse_homophily_rule(sides_rule("both"), attrs);
  RandomStream rng(1);
  RuleReport r = run_homophily_rule(store, rule, rng);
  EXPECT_EQ(maximum_matching(10, 7, [](auto, auto) { return true; }), 7u);
  EXPECT_EQ(r.created, 7u);
  EXPECT_EQ(r.required, 10u);
  EXPECT_EQ(r.unfulfilled, 3u);
  EXPECT_EQ(r.orphans, 3u);
  EXPECT_DOUBLE_EQ(matching_error({r}).at("pair"), 0.3);
}

TEST(HomophilyRule, NeverExceedsMaximumMatching) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    BayesianNetwork attrs = parse_bn(kSidesAttributes);
    PopulationStore store(attrs, {{"pair", false}});
    std::size_t left = 3 + gen() % 10, right = 3 + gen() % 10;
    for (std::size_t i = 0; i < left; ++i) store.add_agent({0, 1});
    for (std::size_t i = 0; i < right; ++i) store.add_agent({1, static_cast<int>(gen() % 2)});
    HomophilyRule rule = parse_homophily_rule(sides_rule("both"), attrs);
    RandomStream rng(trial);
    RuleReport r = run_homophily_rule(store, rule, rng);
    std::size_t best = maximum_matching(left, right, [&](std::size_t, std::size_t v) {
      return store.agent(static_cast<AgentId>(left + v)).required[0] > 0;
    });
    // Every peer is compatible with every driver, so greedy reaches the optimum.
    EXPECT_EQ(r.created, best);
    EXPECT_EQ(r.created + r.unfulfilled, r.required);
  }
}

TEST(HomophilyRule, OneSidedCountsLeaveTargetsUnbounded) {
  BayesianNetwork attrs = parse_bn(kSidesAttributes);
  PopulationStore store(attrs, {{"pair", true}});
  for (int i = 0; i < 10; ++i) store.add_agent({0, 1});
  store.add_agent({1, 0});
  HomophilyRule rule = parse_homophily_rule(sides_rule("a1"), attrs);
  RandomStream rng(2);
  RuleReport r = run_homophily_rule(store, rule, rng);
  EXPECT_EQ(r.created, 10u);
  EXPECT_EQ(store.in_neighbors(0, 10).size(), 10u);
  EXPECT_EQ(store.agent(10).created[0], 0);

  PopulationStore capped(attrs, {{"pair", true}});
  for (int i = 0; i < 10; ++i) capped.add_agent({0, 1});
  capped.add_agent({1, 0});
  capped.add_agent({1, 0});
  rule.max_incoming = 1;
  RandomStream rng2(2);
  r = run_homophily_rule(capped, rule, rng2);
  EXPECT_EQ(r.created, 2u);
  EXPECT_EQ(r.unfulfilled, 8u);
}

TEST(HomophilyRule, HeaderErrors) {
  BayesianNetwork attrs = parse_bn(kSidesAttributes);
  EXPECT_THROW(parse_homophily_rule("variable a { x }\ncpt a { 1 }\n", attrs), ParseError);
  EXPECT_THROW(parse_counts("sometimes"), Error);
  std::string bad_link = sides_rule("both");
  bad_link.replace(bad_link.find("link=link"), 9, "link=a1_side");
  EXPECT_THROW(parse_homophily_rule(bad_link, attrs), ValidationError);
  std::string unknown = sides_rule("both");
  for (std::size_t at; (at = unknown.find("a1_side")) != std::string::npos;)
    unknown.replace(at, 7, "a1_colour");
  EXPECT_THROW(parse_homophily_rule(unknown, attrs), ValidationError);
}

TEST(HomophilyRule, ParseErrorsKeepDocumentLines) {
  BayesianNetwork attrs = parse_bn(kSidesAttributes);
  std::string doc = sides_rule("both");
  doc.replace(doc.find("cpt a2_side { 0.5, 0.5 }"), 24, "cpt a2_side { 0.5, half }");
  try {
    parse_homophily_rule(doc, attrs);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6u) << e.what();
  }
}

TEST(CandidateSets, MatchPosteriorSupportUnderLinkYes) {
  BayesianNetwork attrs = kenya();
  HomophilyRule rule = load_homophily_rule(testing::kenya_dir() / "spouses.bn", attrs);
  PopulationStore store(attrs, kKenyaTypes);
  CandidateSets sets = derive_candidate_sets(rule, store);
  Evidence yes(rule.network.size());
  yes.set(rule.link_variable, rule.link_yes);
  auto check = [&](const std::vector<RoleBinding>& roles, const CandidateQuery& q) {
    ASSERT_EQ(q.attributes.size(), roles.size());
    for (std::size_t i = 0; i < roles.size(); ++i) {
      auto expected = oracle::posterior(rule.network, yes, roles[i].matching_var);
      const AttributeConstraint& c = q.attributes[i];
      EXPECT_EQ(c.variable, roles[i].attribute_var);
      for (std::size_t x = 0; x < c.allowed.size(); ++x)
        EXPECT_EQ(c.allowed[x], expected[roles[i].to_matching[x]] > 0.0)
            << attrs.name(c.variable) << "=" << attrs.variable(c.variable).domain[x];
    }
  };
  check(rule.first, sets.first);
  check(rule.second, sets.second);
}

TEST(CandidateSets, SpousesSplitByGender) {
  PopulationStore store = kenya_population(800, 11);
  HomophilyRule rule =
      load_homophily_rule(testing::kenya_dir() / "spouses.bn", store.attribute_bn());
  CandidateSets sets = derive_candidate_sets(rule, store);
  const auto& bn = store.attribute_bn();
  VarId g = bn.index_of("gender"), age = bn.index_of("ageSlices");
  auto men = store.query_candidates(sets.first);
  auto women = store.query_candidates(sets.second);
  EXPECT_FALSE(men.empty());
  EXPECT_FALSE(women.empty());
  for (AgentId m : men) {
    EXPECT_EQ(store.agent(m).values[g], 0);
    EXPECT_NE(store.agent(m).values[age], 0);
    EXPECT_GT(store.agent(m).remaining(0), 0);
  }
  for (AgentId w : women) EXPECT_EQ(store.agent(w).values[g], 1);
}

TEST(ConditionalCandidates, ExactlyTheCompatiblePeers) {
  PopulationStore store = kenya_population(600, 12);
  const auto& bn = store.attribute_bn();
  for (const char* file : {"spouses.bn", "friendship.bn", "colleagues.bn"}) {
    HomophilyRule rule = load_homophily_rule(testing::kenya_dir() / file, bn);
    LinkTypeId t = store.link_type_id(rule.link_type);
    for (AgentId d = 0; d < 600; d += 29) {
      const Agent& driver = store.agent(d);
      std::vector<AgentId> expected;
      for (const Agent& b : store.agents())
        if (b.id != d && b.remaining(t) > 0 && compatibility(rule, driver, b) > 0.0)
          expected.push_back(b.id);
      std::vector<AgentId> got;
      try {
        got = store.query_candidates(conditional_candidates(rule, store, driver));
      } catch (const ZeroEvidenceError&) {
      }
      EXPECT_EQ(got, expected) << file << " driver " << d;
    }
  }
}

TEST(HomophilyRule, EveryLinkIsCompatibleAndWithinDemand) {
  PopulationStore store = kenya_population(1500, 13);
  const auto& bn = store.attribute_bn();
  std::vector<HomophilyRule> rules;
  for (const char* file : {"spouses.bn", "friendship.bn", "colleagues.bn"})
    rules.push_back(load_homophily_rule(testing::kenya_dir() / file, bn));
  RandomStream master(5);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    RandomStream rng = master.split(std::to_string(i));
    RuleReport r = run_homophily_rule(store, rules[i], rng);
    EXPECT_EQ(r.created + r.unfulfilled, r.required);
    EXPECT_EQ(r.created, r.prototype_successes + r.fallback_successes);
    EXPECT_EQ(r.created, store.link_count(store.link_type_id(rules[i].link_type)));
  }
  for (const Link& l : store.links()) {
    const HomophilyRule& rule = *std::find_if(rules.begin(), rules.end(), [&](const auto& r) {
      return store.link_type_id(r.link_type) == l.type;
    });
    double c = compatibility(rule, store.agent(l.source), store.agent(l.target));
    if (c == 0.0) c = compatibility(rule, store.agent(l.target), store.agent(l.source));
    EXPECT_GT(c, 0.0);
    EXPECT_NE(l.source, l.target);
  }
  for (const Agent& a : store.agents())
    for (LinkTypeId t = 0; t < kKenyaTypes.size(); ++t) EXPECT_LE(a.created[t], a.required[t]);
}

TEST(HomophilyRule, SameSeedSameLinks) {
  auto run = [] {
    PopulationStore store = kenya_population(700, 21);
    HomophilyRule rule = load_homophily_rule(testing::kenya_dir() / "friendship.bn",
                                             store.attribute_bn());
    RandomStream rng(3);
    run_homophily_rule(store, rule, rng);
    std::vector<std::pair<AgentId, AgentId>> out;
    for (const Link& l : store.links()) out.emplace_back(l.source, l.target);
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(HomophilyRule, VacuousRuleCreatesNothing) {
  BayesianNetwork attrs = load_bn_file(testing::fixtures_dir() / "minimal_attributes.bn");
  PopulationStore store(attrs, {{"friendship", false}});
  for (int i = 0; i < 10; ++i) store.add_agent({i % 2, 2});
  HomophilyRule rule = load_homophily_rule(testing::fixtures_dir() / "never.bn", attrs);
  EXPECT_THROW(derive_candidate_sets(rule, store), ZeroEvidenceError);
  RandomStream rng(1);
  RuleReport r = run_homophily_rule(store, rule, rng);
  EXPECT_TRUE(r.vacuous);
  EXPECT_EQ(r.created, 0u);
  EXPECT_EQ(r.required, 20u);
  EXPECT_EQ(r.unfulfilled, 20u);
}

TEST(Compatibility, MatchesEnumeration) {
  PopulationStore store = kenya_population(40, 14);
  const BayesianNetwork& attrs = store.attribute_bn();
  for (const char* file : {"colleagues.bn", "spouses.bn"}) {
    HomophilyRule rule = load_homophily_rule(testing::kenya_dir() / file, attrs);
    for (AgentId a = 0; a < 40; a += 9)
      for (AgentId b = 1; b < 40; b += 13) {
        Evidence ev(rule.network.size());
        for (const RoleBinding& rb : rule.first)
          ev.set(rb.matching_var, rb.to_matching[store.agent(a).values[rb.attribute_var]]);
        for (const RoleBinding& rb : rule.second)
          ev.set(rb.matching_var, rb.to_matching[store.agent(b).values[rb.attribute_var]]);
        auto expected = oracle::posterior(rule.network, ev, rule.link_variable);
        double want = expected.empty() ? 0.0 : expected[rule.link_yes];
        EXPECT_NEAR(compatibility(rule, store.agent(a), store.agent(b)), want, 1e-9)
            << file << " " << a << "," << b;
      }
  }
}

}  // namespace
}  // namespace popnet
