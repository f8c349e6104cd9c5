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

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "popnet/population.hpp"
#include "popnet/rng.hpp"
#include "popnet/rule_report.hpp"

namespace popnet {

// Role of the shared agent a2 in an existing link. `Any` is the only role
// allowed for undirected types.
enum class PivotRole { Source, Target, Any };

PivotRole parse_pivot_role(std::string_view text);  // src | dst | any
std::string_view pivot_role_name(PivotRole r);

// Closes a1 -t1- a2 -t2- a3 into a1 -t3- a3 with a fixed probability.
struct TransitivityRule {
  std::string closing_type;  // t3
  std::string first_type;    // t1, links a1 and a2
  std::string second_type;   // t2, links a2 and a3
  double probability = 1.0;
  PivotRole pivot_in_first = PivotRole::Any;
  PivotRole pivot_in_second = PivotRole::Any;
};

struct Dyad {
  AgentId first = 0;
  AgentId second = 0;
  friend auto operator<=>(const Dyad&, const Dyad&) = default;
};

// Throws Error for undeclared types, a directed role on an undirected type
// or a probability outside [0,1].
void check_rule(const PopulationStore& store, const TransitivityRule& rule);

// Every distinct (a1, a3), a1 != a3, closing some pivot a2 under the rule's
// roles, whose dyad carries no link of any type. Ascending order; for an
// undirected closing type dyads are canonical (smaller id first).
std::vector<Dyad> enumerate_open_triads(const PopulationStore& store,
                                        const TransitivityRule& rule);

// Single-threaded reference for enumerate_open_triads.
std::vector<Dyad> enumerate_open_triads_serial(const PopulationStore& store,
                                               const TransitivityRule& rule);

// One Bernoulli trial per open dyad, in ascending order.
RuleReport run_transitivity_rule(PopulationStore& store,
                                 const TransitivityRule& rule, RandomStream& rng);

}  // namespace popnet
