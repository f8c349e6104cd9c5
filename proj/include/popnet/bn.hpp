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

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace popnet {

using VarId = std::size_t;

inline constexpr double kRowSumTolerance = 1e-9;

struct VariableSpec {
  std::string name;
  std::vector<std::string> domain;
};

// Conditional probability table, stored dense. Rows enumerate the parent
// value combinations in mixed radix with the last parent varying fastest;
// each row holds one probability per child value in domain order. A missing
// row is marked with NaN entries.
struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<double> table;
};

// A discrete Bayesian network. Mutators accept any input so that invalid
// networks can be represented and reported by validate(); every consumer
// beyond validate() expects a network that passed require_valid().
class BayesianNetwork {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  VarId add_variable(std::string name, std::vector<std::string> domain);
  void add_cpt(Cpt cpt);
  // Replaces one row of the CPT owned by `var`.
  void set_row(VarId var, std::size_t row, std::span<const double> probs);

  std::size_t size() const { return variables_.size(); }
  const std::vector<VariableSpec>& variables() const { return variables_; }
  const std::vector<Cpt>& cpts() const { return cpts_; }
  const VariableSpec& variable(VarId v) const { return variables_[v]; }
  const std::string& name(VarId v) const { return variables_[v].name; }
  std::size_t cardinality(VarId v) const {
    return variables_[v].domain.size();
  }

  std::optional<VarId> find(std::string_view name) const;
  // Throws UnknownVariableError.
  VarId index_of(std::string_view name) const;
  std::optional<int> find_value(VarId v, std::string_view label) const;
  // Throws UnknownVariableError when the label is outside the domain.
  int value_index(VarId v, std::string_view label) const;

  // Resolved structure. Parents that do not name a declared variable are
  // dropped here; validate() reports them.
  const std::vector<VarId>& parents(VarId v) const { return nodes_[v].parents; }
  const std::vector<VarId>& children(VarId v) const {
    return nodes_[v].children;
  }
  bool has_cpt(VarId v) const { return nodes_[v].cpt != npos; }
  const Cpt& cpt(VarId v) const { return cpts_[nodes_[v].cpt]; }
  std::size_t row_count(VarId v) const;
  std::span<const double> row(VarId v, std::size_t r) const;
  // Row selected by the parent values of a full assignment.
  std::size_t row_of(VarId v, std::span<const int> assignment) const;
  double probability(VarId v, std::span<const int> assignment) const {
    return row(v, row_of(v, assignment))[assignment[v]];
  }
  // Parent values of row `r`, one per parent.
  std::vector<int> row_values(VarId v, std::size_t r) const;

  // Parents-before-children order, ties broken by declaration order.
  // Empty when the parent graph has a cycle.
  const std::vector<VarId>& topological_order() const { return topo_; }
  bool acyclic() const { return topo_.size() == variables_.size(); }

 private:
  struct Node {
    std::size_t cpt = npos;
    std::vector<VarId> parents;
    std::vector<VarId> children;
  };

  void rebuild();

  std::vector<VariableSpec> variables_;
  std::vector<Cpt> cpts_;
  std::unordered_map<std::string, VarId> by_name_;
  std::vector<Node> nodes_;
  std::vector<VarId> topo_;
};

struct Violation {
  std::string variable;
  std::optional<std::size_t> row;
  std::string rule;
  std::string message;
};

std::vector<Violation> validate(const BayesianNetwork& bn);

// Throws ValidationError listing every violation.
void require_valid(const BayesianNetwork& bn);

// Throws ValidationError on a cycle.
std::vector<std::string> topological_order(const BayesianNetwork& bn);

}  // namespace popnet
