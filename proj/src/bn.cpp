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

#include "popnet/bn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

#include "popnet/errors.hpp"

namespace popnet {

VarId BayesianNetwork::add_variable(std::string name,
                                    std::vector<std::string> domain) {
  VarId id = variables_.size();
  by_name_.try_emplace(name, id);
  variables_.push_back({std::move(name), std::move(domain)});
  rebuild();
  return id;
}

void BayesianNetwork::add_cpt(Cpt cpt) {
  cpts_.push_back(std::move(cpt));
  rebuild();
}

void BayesianNetwork::set_row(VarId var, std::size_t r,
                              std::span<const double> probs) {
  Cpt& c = cpts_.at(nodes_.at(var).cpt);
  std::size_t card = cardinality(var);
  if (probs.size() != card || (r + 1) * card > c.table.size())
    throw Error("set_row: shape mismatch for '" + name(var) + "'");
  std::copy(probs.begin(), probs.end(),
            c.table.begin() + static_cast<std::ptrdiff_t>(r * card));
}

std::optional<VarId> BayesianNetwork::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

VarId BayesianNetwork::index_of(std::string_view name) const {
  auto v = find(name);
  if (!v) throw UnknownVariableError("unknown variable '" + std::string(name) + "'");
  return *v;
}

std::optional<int> BayesianNetwork::find_value(VarId v,
                                               std::string_view label) const {
  const auto& d = variables_[v].domain;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

int BayesianNetwork::value_index(VarId v, std::string_view label) const {
  auto i = find_value(v, label);
  if (!i)
    throw UnknownVariableError("value '" + std::string(label) +
                               "' is not in the domain of '" + name(v) + "'");
  return *i;
}

std::size_t BayesianNetwork::row_count(VarId v) const {
  std::size_t n = 1;
  for (VarId p : nodes_[v].parents) n *= cardinality(p);
  return n;
}

std::span<const double> BayesianNetwork::row(VarId v, std::size_t r) const {
  const Cpt& c = cpt(v);
  std::size_t card = cardinality(v);
  return std::span<const double>(c.table).subspan(r * card, card);
}

std::size_t BayesianNetwork::row_of(VarId v,
                                    std::span<const int> assignment) const {
  std::size_t r = 0;
  for (VarId p : nodes_[v].parents)
    r = r * cardinality(p) + static_cast<std::size_t>(assignment[p]);
  return r;
}

std::vector<int> BayesianNetwork::row_values(VarId v, std::size_t r) const {
  const auto& ps = nodes_[v].parents;
  std::vector<int> out(ps.size());
  for (std::size_t i = ps.size(); i-- > 0;) {
    std::size_t card = cardinality(ps[i]);
    out[i] = static_cast<int>(r % card);
    r /= card;
  }
  return out;
}

void BayesianNetwork::rebuild() {
  nodes_.assign(variables_.size(), Node{});
  for (std::size_t ci = 0; ci < cpts_.size(); ++ci) {
    auto child = find(cpts_[ci].child);
    if (!child || nodes_[*child].cpt != npos) continue;
    Node& node = nodes_[*child];
    node.cpt = ci;
    for (const auto& pname : cpts_[ci].parents)
      if (auto p = find(pname)) node.parents.push_back(*p);
  }
  for (VarId v = 0; v < nodes_.size(); ++v)
    for (VarId p : nodes_[v].parents) nodes_[p].children.push_back(v);

  // Kahn's algorithm; the min-heap keeps declaration order among ready nodes.
  topo_.clear();
  std::vector<std::size_t> pending(nodes_.size());
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (VarId v = 0; v < nodes_.size(); ++v) {
    pending[v] = nodes_[v].parents.size();
    if (pending[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (VarId c : nodes_[v].children)
      if (--pending[c] == 0) ready.push(c);
  }
  if (topo_.size() != nodes_.size()) topo_.clear();
}

std::vector<Violation> validate(const BayesianNetwork& bn) {
  std::vector<Violation> out;
  auto report = [&](const std::string& var, std::optional<std::size_t> row,
                    std::string rule, std::string msg) {
    out.push_back({var, row, std::move(rule), std::move(msg)});
  };

  std::set<std::string> seen;
  for (const auto& v : bn.variables()) {
    if (!seen.insert(v.name).second)
      report(v.name, std::nullopt, "duplicate-variable",
             "variable '" + v.name + "' is declared more than once");
    if (v.domain.empty())
      report(v.name, std::nullopt, "empty-domain",
             "variable '" + v.name + "' has an empty domain");
    std::set<std::string> labels;
    for (const auto& l : v.domain)
      if (!labels.insert(l).second)
        report(v.name, std::nullopt, "duplicate-value",
               "value '" + l + "' repeats in the domain of '" + v.name + "'");
  }

  std::set<std::string> with_cpt;
  for (const auto& c : bn.cpts()) {
    if (!bn.find(c.child)) {
      report(c.child, std::nullopt, "undeclared-variable",
             "CPT for undeclared variable '" + c.child + "'");
      continue;
    }
    if (!with_cpt.insert(c.child).second)
      report(c.child, std::nullopt, "duplicate-cpt",
             "variable '" + c.child + "' has more than one CPT");
    for (const auto& p : c.parents)
      if (!bn.find(p))
        report(c.child, std::nullopt, "undeclared-variable",
               "CPT of '" + c.child + "' names undeclared parent '" + p + "'");
  }

  for (VarId v = 0; v < bn.size(); ++v) {
    const std::string& name = bn.name(v);
    if (!bn.has_cpt(v)) {
      report(name, std::nullopt, "missing-cpt",
             "variable '" + name + "' has no CPT");
      continue;
    }
    if (bn.parents(v).size() != bn.cpt(v).parents.size()) continue;
    std::size_t card = bn.cardinality(v);
    std::size_t rows = bn.row_count(v);
    if (card == 0) continue;
    if (bn.cpt(v).table.size() != rows * card) {
      report(name, std::nullopt, "table-size",
             "CPT of '" + name + "' holds " +
                 std::to_string(bn.cpt(v).table.size()) + " entries, expected " +
                 std::to_string(rows * card));
      continue;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      auto probs = bn.row(v, r);
      if (std::any_of(probs.begin(), probs.end(),
                      [](double p) { return std::isnan(p); })) {
        report(name, r, "missing-row",
               "CPT of '" + name + "' is missing row " + std::to_string(r));
        continue;
      }
      double sum = 0.0;
      bool in_range = true;
      for (double p : probs) {
        sum += p;
        if (!(p >= 0.0 && p <= 1.0)) in_range = false;
      }
      if (!in_range)
        report(name, r, "probability-range",
               "CPT of '" + name + "' row " + std::to_string(r) +
                   " has a probability outside [0,1]");
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        report(name, r, "row-sum",
               "CPT of '" + name + "' row " + std::to_string(r) + " sums to " +
                   std::to_string(sum));
    }
  }

  if (!bn.acyclic()) {
    // Name the variables left over after peeling sources; they sit on or
    // downstream of a cycle.
    std::vector<std::size_t> pending(bn.size());
    std::vector<VarId> stack;
    for (VarId v = 0; v < bn.size(); ++v) {
      pending[v] = bn.parents(v).size();
      if (pending[v] == 0) stack.push_back(v);
    }
    while (!stack.empty()) {
      VarId v = stack.back();
      stack.pop_back();
      for (VarId c : bn.children(v))
        if (--pending[c] == 0) stack.push_back(c);
    }
    for (VarId v = 0; v < bn.size(); ++v)
      if (pending[v] > 0)
        report(bn.name(v), std::nullopt, "cycle",
               "variable '" + bn.name(v) + "' lies on a parent cycle");
  }
  return out;
}

void require_valid(const BayesianNetwork& bn) {
  auto violations = validate(bn);
  if (violations.empty()) return;
  std::string msg = "invalid Bayesian network:";
  for (const auto& v : violations) msg += "\n  " + v.message;
  throw ValidationError(msg);
}

std::vector<std::string> topological_order(const BayesianNetwork& bn) {
  if (!bn.acyclic()) throw ValidationError("Bayesian network has a cycle");
  std::vector<std::string> out;
  out.reserve(bn.size());
  for (VarId v : bn.topological_order()) out.push_back(bn.name(v));
  return out;
}

}  // namespace popnet
