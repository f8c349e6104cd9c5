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

#include "popnet/inference.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <optional>

#include "popnet/errors.hpp"

namespace popnet {

Evidence Evidence::from_labels(
    const BayesianNetwork& bn,
    const std::vector<std::pair<std::string, std::string>>& assertions) {
  Evidence ev(bn.size());
  for (const auto& [var, label] : assertions) ev.set(bn, var, label);
  return ev;
}

void Evidence::set(VarId var, int value) {
  if (var >= values_.size()) values_.resize(var + 1, -1);
  if (values_[var] >= 0 && values_[var] != value)
    throw Error("conflicting evidence on variable " + std::to_string(var));
  values_[var] = value;
}

void Evidence::set(const BayesianNetwork& bn, std::string_view var,
                   std::string_view label) {
  VarId v = bn.index_of(var);
  set(v, bn.value_index(v, label));
}

std::size_t Evidence::count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](int x) { return x >= 0; }));
}

bool operator==(const Evidence& a, const Evidence& b) {
  std::size_t n = std::max(a.values_.size(), b.values_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a.value(i) != b.value(i)) return false;
  return true;
}

namespace {

// Table over `vars` in row-major order, last variable fastest.
struct Factor {
  std::vector<VarId> vars;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  std::size_t stride_of(VarId v) const {
    std::size_t s = 1;
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (vars[i] == v) return s;
      s *= cards[i];
    }
    return 0;
  }
  bool contains(VarId v) const {
    return std::find(vars.begin(), vars.end(), v) != vars.end();
  }
};

// Odometer over `cards` (last fastest) that tracks linear offsets into any
// number of tables through per-table strides.
template <std::size_t K>
struct Odometer {
  std::vector<std::size_t> cards;
  std::array<std::vector<std::size_t>, K> strides;
  std::vector<std::size_t> digits;
  std::array<std::size_t, K> offset{};

  void init() { digits.assign(cards.size(), 0); }
  void advance() {
    for (std::size_t j = cards.size(); j-- > 0;) {
      ++digits[j];
      for (std::size_t k = 0; k < K; ++k) offset[k] += strides[k][j];
      if (digits[j] < cards[j]) return;
      for (std::size_t k = 0; k < K; ++k) offset[k] -= strides[k][j] * cards[j];
      digits[j] = 0;
    }
  }
};

Factor multiply(const Factor& a, const Factor& b) {
  Factor out{a.vars, a.cards, {}};
  for (std::size_t i = 0; i < b.vars.size(); ++i)
    if (!a.contains(b.vars[i])) {
      out.vars.push_back(b.vars[i]);
      out.cards.push_back(b.cards[i]);
    }
  std::size_t size = std::accumulate(out.cards.begin(), out.cards.end(),
                                     std::size_t{1}, std::multiplies<>());
  out.values.resize(size);
  Odometer<2> od;
  od.cards = out.cards;
  for (VarId v : out.vars) {
    od.strides[0].push_back(a.stride_of(v));
    od.strides[1].push_back(b.stride_of(v));
  }
  od.init();
  for (std::size_t i = 0; i < size; ++i) {
    out.values[i] = a.values[od.offset[0]] * b.values[od.offset[1]];
    od.advance();
  }
  return out;
}

Factor sum_out(const Factor& f, VarId var) {
  Factor out;
  std::size_t var_stride = f.stride_of(var), var_card = 0;
  Odometer<1> od;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (f.vars[i] == var) {
      var_card = f.cards[i];
      continue;
    }
    out.vars.push_back(f.vars[i]);
    out.cards.push_back(f.cards[i]);
    od.strides[0].push_back(f.stride_of(f.vars[i]));
  }
  od.cards = out.cards;
  od.init();
  std::size_t size = std::accumulate(out.cards.begin(), out.cards.end(),
                                     std::size_t{1}, std::multiplies<>());
  out.values.assign(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < var_card; ++k)
      s += f.values[od.offset[0] + k * var_stride];
    out.values[i] = s;
    od.advance();
  }
  return out;
}

// CPT of `v` restricted to the evidence, over its unobserved family members.
Factor cpt_factor(const BayesianNetwork& bn, VarId v, const Evidence& ev) {
  const auto& parents = bn.parents(v);
  std::vector<VarId> scope(parents.begin(), parents.end());
  scope.push_back(v);
  std::vector<std::size_t> strides(scope.size());
  std::size_t s = 1;
  for (std::size_t i = scope.size(); i-- > 0;) {
    strides[i] = s;
    s *= bn.cardinality(scope[i]);
  }
  Factor f;
  Odometer<1> od;
  std::size_t base = 0;
  for (std::size_t i = 0; i < scope.size(); ++i) {
    int e = ev.value(scope[i]);
    if (e >= 0) {
      base += static_cast<std::size_t>(e) * strides[i];
    } else {
      f.vars.push_back(scope[i]);
      f.cards.push_back(bn.cardinality(scope[i]));
      od.strides[0].push_back(strides[i]);
    }
  }
  od.cards = f.cards;
  od.init();
  od.offset[0] = base;
  std::size_t size = std::accumulate(f.cards.begin(), f.cards.end(),
                                     std::size_t{1}, std::multiplies<>());
  const auto& table = bn.cpt(v).table;
  f.values.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    f.values[i] = table[od.offset[0]];
    od.advance();
  }
  return f;
}

void check_evidence(const BayesianNetwork& bn, const Evidence& ev) {
  auto vals = ev.values();
  for (std::size_t v = 0; v < vals.size(); ++v) {
    if (vals[v] < 0) continue;
    if (v >= bn.size())
      throw UnknownVariableError("evidence on unknown variable index " +
                                 std::to_string(v));
    if (static_cast<std::size_t>(vals[v]) >= bn.cardinality(v))
      throw UnknownVariableError("evidence value out of the domain of '" +
                                 bn.name(v) + "'");
  }
}

// Ancestral closure of `seeds`; everything else is barren and sums to one.
std::vector<bool> relevant_set(const BayesianNetwork& bn,
                               std::vector<VarId> seeds) {
  std::vector<bool> keep(bn.size(), false);
  while (!seeds.empty()) {
    VarId v = seeds.back();
    seeds.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (VarId p : bn.parents(v))
      if (!keep[p]) seeds.push_back(p);
  }
  return keep;
}

// Eliminates every unobserved relevant variable except `keep_var` (npos for
// none) and returns the product of what remains.
Factor eliminate(const BayesianNetwork& bn, const Evidence& ev,
                 const std::vector<bool>& relevant, VarId keep_var) {
  std::vector<Factor> factors;
  double constant = 1.0;
  std::vector<VarId> hidden;
  for (VarId v = 0; v < bn.size(); ++v) {
    if (!relevant[v]) continue;
    Factor f = cpt_factor(bn, v, ev);
    if (f.vars.empty())
      constant *= f.values[0];
    else
      factors.push_back(std::move(f));
    if (!ev.has(v) && v != keep_var) hidden.push_back(v);
  }

  while (!hidden.empty()) {
    // Greedy min-weight: cheapest intermediate table first, lowest id on ties.
    std::size_t best = 0, best_weight = std::numeric_limits<std::size_t>::max();
    for (std::size_t h = 0; h < hidden.size(); ++h) {
      std::vector<VarId> scope;
      std::size_t weight = 1;
      for (const Factor& f : factors) {
        if (!f.contains(hidden[h])) continue;
        for (std::size_t i = 0; i < f.vars.size(); ++i)
          if (std::find(scope.begin(), scope.end(), f.vars[i]) == scope.end()) {
            scope.push_back(f.vars[i]);
            weight *= f.cards[i];
          }
      }
      if (weight < best_weight) {
        best_weight = weight;
        best = h;
      }
    }
    VarId var = hidden[best];
    hidden.erase(hidden.begin() + static_cast<std::ptrdiff_t>(best));

    std::vector<Factor> rest;
    std::optional<Factor> prod;
    for (Factor& f : factors) {
      if (!f.contains(var)) {
        rest.push_back(std::move(f));
      } else if (!prod) {
        prod = std::move(f);
      } else {
        prod = multiply(*prod, f);
      }
    }
    factors = std::move(rest);
    if (!prod) continue;
    Factor summed = sum_out(*prod, var);
    if (summed.vars.empty())
      constant *= summed.values[0];
    else
      factors.push_back(std::move(summed));
  }

  Factor result{{}, {}, {constant}};
  for (const Factor& f : factors) result = multiply(result, f);
  return result;
}

}  // namespace

std::vector<double> posterior(const BayesianNetwork& bn, const Evidence& ev,
                              VarId query) {
  if (query >= bn.size())
    throw UnknownVariableError("unknown query variable index " +
                               std::to_string(query));
  check_evidence(bn, ev);
  std::size_t card = bn.cardinality(query);

  if (ev.has(query)) {
    if (probability_of_evidence(bn, ev) <= 0.0)
      throw ZeroEvidenceError("evidence has probability zero");
    std::vector<double> out(card, 0.0);
    out[static_cast<std::size_t>(ev.value(query))] = 1.0;
    return out;
  }

  std::vector<VarId> seeds{query};
  auto vals = ev.values();
  for (VarId v = 0; v < vals.size(); ++v)
    if (vals[v] >= 0) seeds.push_back(v);
  auto relevant = relevant_set(bn, seeds);

  // A root with no relevant evidence: the prior row itself.
  if (bn.parents(query).empty() &&
      std::count(relevant.begin(), relevant.end(), true) == 1) {
    auto prior = bn.row(query, 0);
    return {prior.begin(), prior.end()};
  }

  Factor f = eliminate(bn, ev, relevant, query);
  double z = std::accumulate(f.values.begin(), f.values.end(), 0.0);
  if (!(z > 0.0)) throw ZeroEvidenceError("evidence has probability zero");
  std::vector<double> out(card);
  for (std::size_t k = 0; k < card; ++k) out[k] = f.values[k] / z;
  return out;
}

Posterior posterior(const BayesianNetwork& bn, const Evidence& ev,
                    std::string_view query) {
  VarId q = bn.index_of(query);
  return {std::string(query), posterior(bn, ev, q)};
}

double probability_of_evidence(const BayesianNetwork& bn, const Evidence& ev) {
  check_evidence(bn, ev);
  std::vector<VarId> seeds;
  auto vals = ev.values();
  for (VarId v = 0; v < vals.size(); ++v)
    if (vals[v] >= 0) seeds.push_back(v);
  if (seeds.empty()) return 1.0;
  auto relevant = relevant_set(bn, seeds);
  Factor f = eliminate(bn, ev, relevant, BayesianNetwork::npos);
  return f.values[0];
}

double joint_probability(const BayesianNetwork& bn,
                         std::span<const int> assignment) {
  if (assignment.size() < bn.size())
    throw IncompleteAssignmentError("assignment covers " +
                                    std::to_string(assignment.size()) + " of " +
                                    std::to_string(bn.size()) + " variables");
  for (VarId v = 0; v < bn.size(); ++v)
    if (assignment[v] < 0 ||
        static_cast<std::size_t>(assignment[v]) >= bn.cardinality(v))
      throw IncompleteAssignmentError("no valid value for '" + bn.name(v) + "'");
  double p = 1.0;
  for (VarId v : bn.topological_order()) p *= bn.probability(v, assignment);
  return p;
}

}  // namespace popnet
