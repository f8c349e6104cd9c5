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

#include "popnet/transitivity.hpp"

#include <algorithm>

#include "popnet/errors.hpp"

namespace popnet {

PivotRole parse_pivot_role(std::string_view text) {
  if (text == "src") return PivotRole::Source;
  if (text == "dst") return PivotRole::Target;
  if (text == "any") return PivotRole::Any;
  throw Error("pivot role must be src, dst or any, got '" + std::string(text) + "'");
}

std::string_view pivot_role_name(PivotRole r) {
  switch (r) {
    case PivotRole::Source: return "src";
    case PivotRole::Target: return "dst";
    case PivotRole::Any: return "any";
  }
  return "any";
}

void check_rule(const PopulationStore& store, const TransitivityRule& rule) {
  for (const auto& [type, role] :
       {std::pair{rule.first_type, rule.pivot_in_first},
        std::pair{rule.second_type, rule.pivot_in_second}}) {
    LinkTypeId t = store.link_type_id(type);
    if (!store.link_types()[t].directed && role != PivotRole::Any)
      throw Error("link type '" + type + "' is undirected; its pivot role must be 'any'");
  }
  store.link_type_id(rule.closing_type);
  if (!(rule.probability >= 0.0 && rule.probability <= 1.0))
    throw Error("transitivity probability must lie in [0,1]");
}

namespace {

struct Resolved {
  LinkTypeId t1, t2, t3;
  bool undirected_closing;
};

Resolved resolve(const PopulationStore& store, const TransitivityRule& rule) {
  check_rule(store, rule);
  LinkTypeId t3 = store.link_type_id(rule.closing_type);
  return {store.link_type_id(rule.first_type), store.link_type_id(rule.second_type),
          t3, !store.link_types()[t3].directed};
}

// Agents x such that the pivot holds `role` in a link of type t with x.
void partners(const PopulationStore& store, LinkTypeId t, PivotRole role,
              AgentId pivot, std::vector<AgentId>& out) {
  out.clear();
  bool directed = store.link_types()[t].directed;
  if (!directed || role != PivotRole::Target) {
    const auto& o = store.out_neighbors(t, pivot);
    out.insert(out.end(), o.begin(), o.end());
  }
  if (directed && role != PivotRole::Source) {
    const auto& i = store.in_neighbors(t, pivot);
    out.insert(out.end(), i.begin(), i.end());
  }
  if (directed && role == PivotRole::Any) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
}

void close_at(const PopulationStore& store, const TransitivityRule& rule,
              const Resolved& r, AgentId pivot, std::vector<AgentId>& firsts,
              std::vector<AgentId>& seconds, std::vector<Dyad>& out) {
  partners(store, r.t1, rule.pivot_in_first, pivot, firsts);
  if (firsts.empty()) return;
  partners(store, r.t2, rule.pivot_in_second, pivot, seconds);
  for (AgentId a1 : firsts)
    for (AgentId a3 : seconds) {
      if (a1 == a3 || store.linked(a1, a3)) continue;
      if (r.undirected_closing && a1 > a3)
        out.push_back({a3, a1});
      else
        out.push_back({a1, a3});
    }
}

void sort_unique(std::vector<Dyad>& dyads) {
  std::sort(dyads.begin(), dyads.end());
  dyads.erase(std::unique(dyads.begin(), dyads.end()), dyads.end());
}

}  // namespace

std::vector<Dyad> enumerate_open_triads_serial(const PopulationStore& store,
                                               const TransitivityRule& rule) {
  Resolved r = resolve(store, rule);
  std::vector<Dyad> out;
  std::vector<AgentId> firsts, seconds;
  for (AgentId pivot = 0; pivot < store.size(); ++pivot)
    close_at(store, rule, r, pivot, firsts, seconds, out);
  sort_unique(out);
  return out;
}

std::vector<Dyad> enumerate_open_triads(const PopulationStore& store,
                                        const TransitivityRule& rule) {
  Resolved r = resolve(store, rule);
  std::vector<Dyad> out;
  const auto n = static_cast<std::int64_t>(store.size());
#pragma omp parallel
  {
    std::vector<Dyad> local;
    std::vector<AgentId> firsts, seconds;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::int64_t pivot = 0; pivot < n; ++pivot)
      close_at(store, rule, r, static_cast<AgentId>(pivot), firsts, seconds, local);
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  sort_unique(out);
  return out;
}

RuleReport run_transitivity_rule(PopulationStore& store,
                                 const TransitivityRule& rule, RandomStream& rng) {
  RuleReport report;
  report.link_type = rule.closing_type;
  report.kind = RuleKind::Transitive;
  LinkTypeId t3 = store.link_type_id(rule.closing_type);
  std::vector<Dyad> dyads = enumerate_open_triads(store, rule);
  report.required = dyads.size();
  for (const Dyad& d : dyads) {
    if (!rng.bernoulli(rule.probability)) continue;
    if (store.record_link(d.first, d.second, t3, CountedEndpoints::None) ==
        LinkOutcome::Inserted)
      ++report.created;
  }
  return report;
}

}  // namespace popnet
