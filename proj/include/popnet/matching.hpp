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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "popnet/bn.hpp"
#include "popnet/population.hpp"
#include "popnet/rng.hpp"
#include "popnet/rule_report.hpp"

namespace popnet {

inline constexpr int kDefaultRetryBudget = 20;
inline constexpr std::size_t kDefaultSmallSetThreshold = 50;

// A matching-network variable that copies an attribute of one agent.
struct RoleBinding {
  VarId matching_var = 0;
  VarId attribute_var = 0;
  std::vector<int> to_matching;   // attribute value -> matching value
  std::vector<int> to_attribute;  // matching value -> attribute value
};

// Header line of a matching network document:
//   matching <linktype> link=<var> a1=<prefix> a2=<prefix> counts=<both|a1|a2>
struct MatchingHeader {
  std::string link_type;
  std::string link_variable;
  std::string a1_prefix;
  std::string a2_prefix;
  CountedEndpoints counts = CountedEndpoints::Both;
};

struct HomophilyRule {
  std::string link_type;
  BayesianNetwork network;
  VarId link_variable = 0;
  int link_yes = 0;
  std::vector<RoleBinding> first;   // a1 copies
  std::vector<RoleBinding> second;  // a2 copies
  std::vector<VarId> internal;      // condition nodes
  CountedEndpoints counts = CountedEndpoints::Both;
  int retry_budget = kDefaultRetryBudget;
  std::size_t small_set_threshold = kDefaultSmallSetThreshold;
  // Cap on incoming links of this type per second agent, if any.
  std::optional<int> max_incoming;
};

CountedEndpoints parse_counts(std::string_view text);
std::string_view counts_name(CountedEndpoints c);

// Splits the header from a matching document; the header line is blanked so
// BN parse errors keep their line numbers. Throws ParseError.
std::pair<MatchingHeader, std::string> split_matching_document(
    std::string_view text);

// Binds the matching network to the attribute network. Throws
// ValidationError when a prefixed variable has no attribute counterpart or
// the link variable is not {yes,no}.
HomophilyRule make_homophily_rule(const MatchingHeader& header,
                                  BayesianNetwork matching,
                                  const BayesianNetwork& attribute_bn);

HomophilyRule parse_homophily_rule(std::string_view text,
                                   const BayesianNetwork& attribute_bn);
HomophilyRule load_homophily_rule(const std::filesystem::path& path,
                                  const BayesianNetwork& attribute_bn);

struct CandidateSets {
  CandidateQuery first;
  CandidateQuery second;
};

// Predicates for the two candidate sets under evidence link=yes: each copied
// attribute keeps the values with nonzero posterior, plus the remaining-demand
// constraint on counted endpoints. Throws ZeroEvidenceError when the link
// variable can never be yes.
CandidateSets derive_candidate_sets(const HomophilyRule& rule,
                                    const PopulationStore& store);

// Predicate for second agents compatible with `first` (or first agents
// compatible with a second agent when `driver_is_first` is false). Excludes
// the driver itself and every agent already linked with it. Throws
// ZeroEvidenceError when no peer can be compatible.
CandidateQuery conditional_candidates(const HomophilyRule& rule,
                                      const PopulationStore& store,
                                      const Agent& driver,
                                      bool driver_is_first = true);

// p(link=yes | Att(a1), Att(a2)); zero when the attribute evidence itself
// is impossible.
double compatibility(const HomophilyRule& rule, const Agent& a1,
                     const Agent& a2);

// Sequential stochastic matcher: drivers in seeded random order, prototype
// search on large candidate sets, accept/reject fallback otherwise.
RuleReport run_homophily_rule(PopulationStore& store, const HomophilyRule& rule,
                              RandomStream& rng);

}  // namespace popnet
