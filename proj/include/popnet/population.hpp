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

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "popnet/bn.hpp"
#include "popnet/rng.hpp"

namespace popnet {

using AgentId = std::uint32_t;
using LinkTypeId = std::size_t;

// Attribute-BN variables named with this prefix hold the number of links of
// the suffixed type an agent requires; every other variable is an attribute.
inline constexpr std::string_view kRequiredCountPrefix = "RC_";

struct LinkType {
  std::string name;
  bool directed = false;
};

// Which endpoint counters a link consumes. Source/target refer to the rule's
// first and second agent, before undirected canonicalization.
enum class CountedEndpoints { None, Both, Source, Target };

struct Agent {
  AgentId id = 0;
  // One value index per attribute-BN variable, required counts included.
  std::vector<int> values;
  std::vector<int> required;  // per link type
  std::vector<int> created;   // per link type

  int remaining(LinkTypeId t) const { return required[t] - created[t]; }
};

struct Link {
  AgentId source = 0;
  AgentId target = 0;
  LinkTypeId type = 0;
};

enum class LinkOutcome { Inserted, DyadOccupied, SelfLink };

struct AttributeConstraint {
  VarId variable = 0;
  std::vector<bool> allowed;  // indexed by value
};

struct LinkCountConstraint {
  enum class Counter { Required, Created, Remaining, Incoming };
  LinkTypeId type = 0;
  Counter counter = Counter::Remaining;
  int min = 0;
  int max = std::numeric_limits<int>::max();
};

struct CandidateQuery {
  std::vector<AttributeConstraint> attributes;
  std::vector<LinkCountConstraint> link_counts;
  std::vector<AgentId> excluded;
  // Drop agents already linked with this one by a link of any type.
  std::optional<AgentId> not_linked_with;
};

class PopulationStore {
 public:
  // Throws ValidationError when a required-count variable for a declared
  // type has labels that are not non-negative integers.
  PopulationStore(BayesianNetwork attribute_bn, std::vector<LinkType> types);

  const BayesianNetwork& attribute_bn() const { return bn_; }
  const std::vector<LinkType>& link_types() const { return types_; }
  // Throws Error for an undeclared type.
  LinkTypeId link_type_id(std::string_view name) const;
  std::optional<LinkTypeId> find_link_type(std::string_view name) const;

  // Attribute variables (no RC_ prefix) in declaration order.
  const std::vector<VarId>& attribute_variables() const { return attributes_; }
  // Required-count variables in declaration order.
  const std::vector<VarId>& count_variables() const { return count_vars_; }
  // Count variable backing link type `t`, if any.
  std::optional<VarId> count_variable(LinkTypeId t) const {
    return count_var_of_type_[t];
  }

  AgentId add_agent(std::vector<int> values);
  std::size_t size() const { return agents_.size(); }
  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(AgentId id) const { return agents_.at(id); }

  // Agents holding value `value` of `var`, ascending ids.
  const std::vector<AgentId>& agents_with(VarId var, int value) const {
    return index_[var][static_cast<std::size_t>(value)];
  }

  // Ascending ids of the agents satisfying every constraint. Throws
  // UnknownVariableError for an attribute outside the network.
  std::vector<AgentId> query_candidates(const CandidateQuery& q) const;
  bool matches(const CandidateQuery& q, const Agent& a) const;

  LinkOutcome record_link(AgentId a1, AgentId a2, LinkTypeId t,
                          CountedEndpoints counts);

  bool linked(AgentId a, AgentId b) const;
  std::optional<Link> link_between(AgentId a, AgentId b) const;
  const std::vector<Link>& links() const { return links_; }
  CountedEndpoints link_counts(std::size_t link_index) const {
    return counted_[link_index];
  }
  std::size_t link_count(LinkTypeId t) const { return per_type_count_[t]; }

  // For undirected types both lists hold all neighbours.
  const std::vector<AgentId>& out_neighbors(LinkTypeId t, AgentId a) const {
    return out_[t][a];
  }
  const std::vector<AgentId>& in_neighbors(LinkTypeId t, AgentId a) const {
    return in_[t][a];
  }

  // Recomputes the attribute index by full scan and compares.
  bool index_consistent() const;

 private:
  static std::uint64_t dyad_key(AgentId a, AgentId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
  int counter_value(const Agent& a, const LinkCountConstraint& c) const;

  BayesianNetwork bn_;
  std::vector<LinkType> types_;
  std::vector<VarId> attributes_;
  std::vector<VarId> count_vars_;
  std::vector<std::optional<VarId>> count_var_of_type_;
  // Integer value of each label of each count variable.
  std::vector<std::vector<int>> count_values_;

  std::vector<Agent> agents_;
  std::vector<std::vector<std::vector<AgentId>>> index_;
  std::vector<Link> links_;
  std::vector<CountedEndpoints> counted_;
  std::vector<std::size_t> per_type_count_;
  std::unordered_map<std::uint64_t, std::uint32_t> dyads_;
  std::vector<std::vector<std::vector<AgentId>>> out_;
  std::vector<std::vector<std::vector<AgentId>>> in_;
};

// Samples `n` agents from the attribute network with empty evidence. Ids
// are assigned 0..n-1 in creation order.
PopulationStore generate_population(const BayesianNetwork& attribute_bn,
                                    const std::vector<LinkType>& types,
                                    std::size_t n, RandomStream& rng);

struct LearnedNetwork {
  // Structure of the source network with every observed row replaced by its
  // maximum-likelihood estimate; unobserved rows keep the source values.
  BayesianNetwork network;
  std::vector<std::vector<bool>> observed;          // [variable][row]
  std::vector<std::vector<std::size_t>> row_support;  // [variable][row]
  std::size_t unobserved_rows = 0;
};

LearnedNetwork learn_marginals(const PopulationStore& store,
                               const BayesianNetwork& attribute_bn);

}  // namespace popnet
