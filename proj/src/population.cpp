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

#include "popnet/population.hpp"

#include <algorithm>
#include <charconv>

#include "popnet/errors.hpp"
#include "popnet/sampling.hpp"

namespace popnet {

PopulationStore::PopulationStore(BayesianNetwork attribute_bn,
                                 std::vector<LinkType> types)
    : bn_(std::move(attribute_bn)), types_(std::move(types)) {
  count_var_of_type_.assign(types_.size(), std::nullopt);
  count_values_.resize(bn_.size());
  for (VarId v = 0; v < bn_.size(); ++v) {
    const std::string& name = bn_.name(v);
    if (!name.starts_with(kRequiredCountPrefix)) {
      attributes_.push_back(v);
      continue;
    }
    count_vars_.push_back(v);
    auto t = find_link_type(std::string_view(name).substr(kRequiredCountPrefix.size()));
    for (const auto& label : bn_.variable(v).domain) {
      int n = -1;
      auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), n);
      if (ec != std::errc() || ptr != label.data() + label.size() || n < 0) {
        if (t)
          throw ValidationError("required-count variable '" + name +
                                "' has non-integer value '" + label + "'");
        n = 0;
      }
      count_values_[v].push_back(n);
    }
    if (t) count_var_of_type_[*t] = v;
  }
  index_.resize(bn_.size());
  for (VarId v = 0; v < bn_.size(); ++v) index_[v].resize(bn_.cardinality(v));
  per_type_count_.assign(types_.size(), 0);
  out_.resize(types_.size());
  in_.resize(types_.size());
}

std::optional<LinkTypeId> PopulationStore::find_link_type(
    std::string_view name) const {
  for (LinkTypeId t = 0; t < types_.size(); ++t)
    if (types_[t].name == name) return t;
  return std::nullopt;
}

LinkTypeId PopulationStore::link_type_id(std::string_view name) const {
  auto t = find_link_type(name);
  if (!t) throw Error("undeclared link type '" + std::string(name) + "'");
  return *t;
}

AgentId PopulationStore::add_agent(std::vector<int> values) {
  if (values.size() != bn_.size())
    throw IncompleteAssignmentError("agent needs one value per attribute variable");
  Agent a;
  a.id = static_cast<AgentId>(agents_.size());
  a.required.assign(types_.size(), 0);
  a.created.assign(types_.size(), 0);
  for (LinkTypeId t = 0; t < types_.size(); ++t)
    if (auto v = count_var_of_type_[t])
      a.required[t] = count_values_[*v][static_cast<std::size_t>(values[*v])];
  for (VarId v = 0; v < bn_.size(); ++v)
    index_[v][static_cast<std::size_t>(values[v])].push_back(a.id);
  a.values = std::move(values);
  for (LinkTypeId t = 0; t < types_.size(); ++t) {
    out_[t].emplace_back();
    in_[t].emplace_back();
  }
  agents_.push_back(std::move(a));
  return agents_.back().id;
}

int PopulationStore::counter_value(const Agent& a,
                                   const LinkCountConstraint& c) const {
  using C = LinkCountConstraint::Counter;
  switch (c.counter) {
    case C::Required: return a.required[c.type];
    case C::Created: return a.created[c.type];
    case C::Remaining: return a.remaining(c.type);
    case C::Incoming: return static_cast<int>(in_[c.type][a.id].size());
  }
  return 0;
}

bool PopulationStore::matches(const CandidateQuery& q, const Agent& a) const {
  for (const auto& c : q.attributes)
    if (!c.allowed[static_cast<std::size_t>(a.values[c.variable])]) return false;
  for (const auto& c : q.link_counts) {
    int x = counter_value(a, c);
    if (x < c.min || x > c.max) return false;
  }
  if (std::find(q.excluded.begin(), q.excluded.end(), a.id) != q.excluded.end())
    return false;
  if (q.not_linked_with && (*q.not_linked_with == a.id || linked(*q.not_linked_with, a.id)))
    return false;
  return true;
}

std::vector<AgentId> PopulationStore::query_candidates(
    const CandidateQuery& q) const {
  const AttributeConstraint* driver = nullptr;
  std::size_t driver_size = agents_.size() + 1;
  for (const auto& c : q.attributes) {
    if (c.variable >= bn_.size())
      throw UnknownVariableError("query on unknown attribute index " +
                                 std::to_string(c.variable));
    if (c.allowed.size() != bn_.cardinality(c.variable))
      throw Error("attribute constraint on '" + bn_.name(c.variable) +
                  "' has the wrong domain size");
    std::size_t n = 0;
    for (std::size_t k = 0; k < c.allowed.size(); ++k)
      if (c.allowed[k]) n += index_[c.variable][k].size();
    if (n < driver_size) {
      driver = &c;
      driver_size = n;
    }
  }
  for (const auto& c : q.link_counts)
    if (c.type >= types_.size()) throw Error("query on unknown link type");

  std::vector<AgentId> out;
  if (!driver) {
    for (const Agent& a : agents_)
      if (matches(q, a)) out.push_back(a.id);
    return out;
  }
  for (std::size_t k = 0; k < driver->allowed.size(); ++k) {
    if (!driver->allowed[k]) continue;
    for (AgentId id : index_[driver->variable][k])
      if (matches(q, agents_[id])) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LinkOutcome PopulationStore::record_link(AgentId a1, AgentId a2, LinkTypeId t,
                                         CountedEndpoints counts) {
  if (a1 >= agents_.size() || a2 >= agents_.size() || t >= types_.size())
    throw Error("record_link: unknown agent or link type");
  if (a1 == a2) return LinkOutcome::SelfLink;
  auto [it, fresh] = dyads_.try_emplace(dyad_key(a1, a2),
                                        static_cast<std::uint32_t>(links_.size()));
  if (!fresh) return LinkOutcome::DyadOccupied;

  Link link{a1, a2, t};
  if (!types_[t].directed && link.source > link.target)
    std::swap(link.source, link.target);
  links_.push_back(link);
  counted_.push_back(counts);
  ++per_type_count_[t];
  if (types_[t].directed) {
    out_[t][a1].push_back(a2);
    in_[t][a2].push_back(a1);
  } else {
    out_[t][a1].push_back(a2);
    out_[t][a2].push_back(a1);
    in_[t][a1].push_back(a2);
    in_[t][a2].push_back(a1);
  }
  if (counts == CountedEndpoints::Both || counts == CountedEndpoints::Source)
    ++agents_[a1].created[t];
  if (counts == CountedEndpoints::Both || counts == CountedEndpoints::Target)
    ++agents_[a2].created[t];
  return LinkOutcome::Inserted;
}

bool PopulationStore::linked(AgentId a, AgentId b) const {
  return dyads_.count(dyad_key(a, b)) > 0;
}

std::optional<Link> PopulationStore::link_between(AgentId a, AgentId b) const {
  auto it = dyads_.find(dyad_key(a, b));
  if (it == dyads_.end()) return std::nullopt;
  return links_[it->second];
}

bool PopulationStore::index_consistent() const {
  for (VarId v = 0; v < bn_.size(); ++v) {
    std::vector<std::vector<AgentId>> scan(bn_.cardinality(v));
    for (const Agent& a : agents_)
      scan[static_cast<std::size_t>(a.values[v])].push_back(a.id);
    if (scan != index_[v]) return false;
  }
  return true;
}

PopulationStore generate_population(const BayesianNetwork& attribute_bn,
                                    const std::vector<LinkType>& types,
                                    std::size_t n, RandomStream& rng) {
  require_valid(attribute_bn);
  PopulationStore store(attribute_bn, types);
  PosteriorCache cache(attribute_bn);
  Evidence none(attribute_bn.size());
  for (std::size_t i = 0; i < n; ++i)
    store.add_agent(sample_prototype(cache, none, rng));
  return store;
}

LearnedNetwork learn_marginals(const PopulationStore& store,
                               const BayesianNetwork& attribute_bn) {
  LearnedNetwork out{attribute_bn, {}, {}, 0};
  out.observed.resize(attribute_bn.size());
  out.row_support.resize(attribute_bn.size());
  for (VarId v = 0; v < attribute_bn.size(); ++v) {
    std::size_t rows = attribute_bn.row_count(v);
    std::size_t card = attribute_bn.cardinality(v);
    std::vector<std::size_t> counts(rows * card, 0);
    std::vector<std::size_t> support(rows, 0);
    for (const Agent& a : store.agents()) {
      std::size_t r = attribute_bn.row_of(v, a.values);
      ++counts[r * card + static_cast<std::size_t>(a.values[v])];
      ++support[r];
    }
    out.observed[v].assign(rows, false);
    for (std::size_t r = 0; r < rows; ++r) {
      if (support[r] == 0) {
        ++out.unobserved_rows;
        continue;
      }
      out.observed[v][r] = true;
      std::vector<double> probs(card);
      for (std::size_t k = 0; k < card; ++k)
        probs[k] = static_cast<double>(counts[r * card + k]) /
                   static_cast<double>(support[r]);
      out.network.set_row(v, r, probs);
    }
    out.row_support[v] = std::move(support);
  }
  return out;
}

}  // namespace popnet
