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

#include "popnet/matching.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"
#include "popnet/inference.hpp"
#include "popnet/sampling.hpp"

namespace popnet {

CountedEndpoints parse_counts(std::string_view text) {
  if (text == "both") return CountedEndpoints::Both;
  if (text == "a1") return CountedEndpoints::Source;
  if (text == "a2") return CountedEndpoints::Target;
  throw Error("counts must be one of both|a1|a2, got '" + std::string(text) + "'");
}

std::string_view counts_name(CountedEndpoints c) {
  switch (c) {
    case CountedEndpoints::Both: return "both";
    case CountedEndpoints::Source: return "a1";
    case CountedEndpoints::Target: return "a2";
    case CountedEndpoints::None: return "none";
  }
  return "none";
}

std::pair<MatchingHeader, std::string> split_matching_document(
    std::string_view text) {
  std::string body(text);
  std::size_t pos = 0, line_no = 1;
  while (pos < body.size()) {
    std::size_t end = body.find('\n', pos);
    if (end == std::string::npos) end = body.size();
    std::string line = body.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string word;
    if (!(in >> word)) {
      pos = end + 1;
      ++line_no;
      continue;
    }
    if (word != "matching")
      throw ParseError("matching document must start with a 'matching' header",
                       line_no, 0);
    MatchingHeader h;
    if (!(in >> h.link_type))
      throw ParseError("matching header needs a link type", line_no, 0);
    bool have_counts = false;
    while (in >> word) {
      auto eq = word.find('=');
      if (eq == std::string::npos)
        throw ParseError("expected key=value in matching header, found '" + word + "'",
                         line_no, 0);
      std::string key = word.substr(0, eq), value = word.substr(eq + 1);
      if (key == "link") {
        h.link_variable = value;
      } else if (key == "a1") {
        h.a1_prefix = value;
      } else if (key == "a2") {
        h.a2_prefix = value;
      } else if (key == "counts") {
        try {
          h.counts = parse_counts(value);
        } catch (const Error& e) {
          throw ParseError(e.what(), line_no, 0);
        }
        have_counts = true;
      } else {
        throw ParseError("unknown matching header key '" + key + "'", line_no, 0);
      }
    }
    if (h.link_variable.empty() || h.a1_prefix.empty() || h.a2_prefix.empty() ||
        !have_counts)
      throw ParseError("matching header needs link=, a1=, a2= and counts=",
                       line_no, 0);
    for (std::size_t i = pos; i < end; ++i) body[i] = ' ';
    return {h, body};
  }
  throw ParseError("missing 'matching' header", line_no, 0);
}

HomophilyRule make_homophily_rule(const MatchingHeader& header,
                                  BayesianNetwork matching,
                                  const BayesianNetwork& attribute_bn) {
  require_valid(matching);
  HomophilyRule rule;
  rule.link_type = header.link_type;
  rule.counts = header.counts;
  auto link = matching.find(header.link_variable);
  if (!link)
    throw ValidationError("matching network for '" + header.link_type +
                          "' has no link variable '" + header.link_variable + "'");
  const auto& ld = matching.variable(*link).domain;
  std::set<std::string> link_labels(ld.begin(), ld.end());
  if (ld.size() != 2 || link_labels != std::set<std::string>{"yes", "no"})
    throw ValidationError("link variable '" + header.link_variable +
                          "' must have domain {yes, no}");
  rule.link_variable = *link;
  rule.link_yes = matching.value_index(*link, "yes");

  auto bind = [&](VarId mv, std::string_view attr_name) {
    auto av = attribute_bn.find(attr_name);
    if (!av)
      throw ValidationError("matching variable '" + matching.name(mv) +
                            "' copies unknown attribute '" + std::string(attr_name) +
                            "'");
    const auto& md = matching.variable(mv).domain;
    const auto& ad = attribute_bn.variable(*av).domain;
    if (std::set<std::string>(md.begin(), md.end()) !=
        std::set<std::string>(ad.begin(), ad.end()))
      throw ValidationError("matching variable '" + matching.name(mv) +
                            "' must have the same values as attribute '" +
                            std::string(attr_name) + "'");
    RoleBinding b{mv, *av, {}, {}};
    for (const auto& label : ad) b.to_matching.push_back(*matching.find_value(mv, label));
    for (const auto& label : md) b.to_attribute.push_back(*attribute_bn.find_value(*av, label));
    return b;
  };

  for (VarId v = 0; v < matching.size(); ++v) {
    if (v == *link) continue;
    std::string_view name = matching.name(v);
    if (name.starts_with(header.a1_prefix)) {
      rule.first.push_back(bind(v, name.substr(header.a1_prefix.size())));
    } else if (name.starts_with(header.a2_prefix)) {
      rule.second.push_back(bind(v, name.substr(header.a2_prefix.size())));
    } else {
      rule.internal.push_back(v);
    }
  }
  rule.network = std::move(matching);
  return rule;
}

HomophilyRule parse_homophily_rule(std::string_view text,
                                   const BayesianNetwork& attribute_bn) {
  auto [header, body] = split_matching_document(text);
  return make_homophily_rule(header, parse_bn(body), attribute_bn);
}

HomophilyRule load_homophily_rule(const std::filesystem::path& path,
                                  const BayesianNetwork& attribute_bn) {
  try {
    return parse_homophily_rule(read_text_file(path), attribute_bn);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

namespace {

bool counts_first(CountedEndpoints c) {
  return c == CountedEndpoints::Both || c == CountedEndpoints::Source;
}
bool counts_second(CountedEndpoints c) {
  return c == CountedEndpoints::Both || c == CountedEndpoints::Target;
}

LinkCountConstraint remaining_demand(LinkTypeId t) {
  return {t, LinkCountConstraint::Counter::Remaining, 1,
          std::numeric_limits<int>::max()};
}

Evidence link_evidence(const HomophilyRule& rule) {
  Evidence ev(rule.network.size());
  ev.set(rule.link_variable, rule.link_yes);
  return ev;
}

void add_agent_evidence(Evidence& ev, const std::vector<RoleBinding>& bindings,
                        const Agent& a) {
  for (const RoleBinding& b : bindings)
    ev.set(b.matching_var,
           b.to_matching[static_cast<std::size_t>(a.values[b.attribute_var])]);
}

template <typename PosteriorFn>
std::vector<AttributeConstraint> support_constraints(
    const std::vector<RoleBinding>& bindings, const BayesianNetwork& attr_bn,
    PosteriorFn&& post) {
  std::vector<AttributeConstraint> out;
  for (const RoleBinding& b : bindings) {
    const std::vector<double>& p = post(b.matching_var);
    AttributeConstraint c{b.attribute_var,
                          std::vector<bool>(attr_bn.cardinality(b.attribute_var))};
    for (std::size_t k = 0; k < c.allowed.size(); ++k)
      c.allowed[k] = p[static_cast<std::size_t>(b.to_matching[k])] > 0.0;
    out.push_back(std::move(c));
  }
  return out;
}

void add_side_constraints(CandidateQuery& q, const HomophilyRule& rule,
                          LinkTypeId t, bool second_side) {
  if (second_side ? counts_second(rule.counts) : counts_first(rule.counts))
    q.link_counts.push_back(remaining_demand(t));
  if (second_side && rule.max_incoming)
    q.link_counts.push_back({t, LinkCountConstraint::Counter::Incoming, 0,
                             *rule.max_incoming - 1});
}

CandidateQuery conditional_query(const HomophilyRule& rule,
                                 const PopulationStore& store,
                                 const Agent& driver, bool driver_is_first,
                                 PosteriorCache& cache) {
  Evidence ev = link_evidence(rule);
  add_agent_evidence(ev, driver_is_first ? rule.first : rule.second, driver);
  if (!(cache.probability_of_evidence(ev) > 0.0))
    throw ZeroEvidenceError("no peer can be compatible with agent " +
                            std::to_string(driver.id));
  CandidateQuery q;
  q.attributes = support_constraints(
      driver_is_first ? rule.second : rule.first, store.attribute_bn(),
      [&](VarId v) -> const std::vector<double>& { return cache.posterior(ev, v); });
  add_side_constraints(q, rule, store.link_type_id(rule.link_type), driver_is_first);
  q.excluded.push_back(driver.id);
  q.not_linked_with = driver.id;
  return q;
}

class Matcher {
 public:
  Matcher(PopulationStore& store, const HomophilyRule& rule, RandomStream& rng)
      : store_(store),
        rule_(rule),
        rng_(rng),
        cache_(rule.network),
        type_(store.link_type_id(rule.link_type)),
        driver_first_(rule.counts != CountedEndpoints::Target) {
    double combinations = 1.0;
    for (const RoleBinding& b : peer_bindings())
      combinations *= static_cast<double>(rule.network.cardinality(b.matching_var));
    if (combinations >= 0x1p63)
      throw ValidationError("matching network for '" + rule.link_type +
                            "' copies too many attribute combinations");
  }

  RuleReport run() {
    RuleReport report;
    report.link_type = rule_.link_type;
    report.kind = RuleKind::Homophily;

    std::vector<AgentId> drivers;
    try {
      CandidateSets sets = derive_candidate_sets(rule_, store_);
      drivers = store_.query_candidates(driver_first_ ? sets.first : sets.second);
    } catch (const ZeroEvidenceError&) {
      report.vacuous = true;
      CandidateQuery demand;
      demand.link_counts.push_back(remaining_demand(type_));
      drivers = store_.query_candidates(demand);
    }
    rng_.shuffle(drivers);

    for (AgentId d : drivers) {
      int demand = driver_capacity(d);
      if (demand <= 0) continue;
      report.required += static_cast<std::size_t>(demand);
      if (!report.vacuous) match_driver(d, report);
      int left = driver_capacity(d);
      if (left > 0) {
        ++report.orphans;
        report.unfulfilled += static_cast<std::size_t>(left);
      }
    }
    return report;
  }

 private:
  int driver_capacity(AgentId d) const {
    const Agent& a = store_.agent(d);
    int cap = a.remaining(type_);
    if (!driver_first_ && rule_.max_incoming)
      cap = std::min(cap, *rule_.max_incoming -
                              static_cast<int>(store_.in_neighbors(type_, d).size()));
    return cap;
  }

  // Candidates are queried once per driver: a new link only changes the
  // counters of the driver and the chosen peer, and the peer becomes
  // ineligible by being linked to the driver.
  void match_driver(AgentId d, RuleReport& report) {
    CandidateQuery query;
    try {
      query = conditional_query(rule_, store_, store_.agent(d), driver_first_, cache_);
    } catch (const ZeroEvidenceError&) {
      return;
    }
    Evidence proto_ev = link_evidence(rule_);
    add_agent_evidence(proto_ev, driver_first_ ? rule_.first : rule_.second,
                       store_.agent(d));
    std::vector<AgentId> cands = store_.query_candidates(query);
    // Candidates grouped by their copied attribute values, in the matching
    // network's value indices; each group stays in ascending id order.
    std::unordered_map<std::uint64_t, std::vector<AgentId>> groups;
    if (cands.size() >= rule_.small_set_threshold)
      for (AgentId c : cands) groups[peer_signature(store_.agent(c))].push_back(c);

    while (driver_capacity(d) > 0 && !cands.empty()) {
      std::optional<AgentId> peer;
      if (cands.size() >= rule_.small_set_threshold) {
        for (int attempt = 0; attempt < rule_.retry_budget && !peer; ++attempt) {
          Prototype proto = sample_prototype(cache_, proto_ev, rng_);
          auto it = groups.find(prototype_signature(proto));
          if (it != groups.end() && !it->second.empty()) {
            peer = it->second[rng_.below(it->second.size())];
            ++report.prototype_successes;
          }
        }
      }
      if (!peer) {
        peer = fallback(d, cands, report);
        if (!peer) return;
        ++report.fallback_successes;
      }
      AgentId a1 = driver_first_ ? d : *peer;
      AgentId a2 = driver_first_ ? *peer : d;
      if (store_.record_link(a1, a2, type_, rule_.counts) != LinkOutcome::Inserted)
        throw Error("matcher proposed an occupied dyad");
      ++report.created;

      cands.erase(std::lower_bound(cands.begin(), cands.end(), *peer));
      if (!groups.empty()) {
        auto& group = groups[peer_signature(store_.agent(*peer))];
        group.erase(std::lower_bound(group.begin(), group.end(), *peer));
      }
    }
  }

  // Mixed-radix code of the peer's copied values in matching-network indices.
  std::uint64_t peer_signature(const Agent& a) const {
    std::uint64_t code = 0;
    for (const RoleBinding& b : peer_bindings())
      code = code * rule_.network.cardinality(b.matching_var) +
             static_cast<std::uint64_t>(
                 b.to_matching[static_cast<std::size_t>(a.values[b.attribute_var])]);
    return code;
  }

  std::uint64_t prototype_signature(const Prototype& proto) const {
    std::uint64_t code = 0;
    for (const RoleBinding& b : peer_bindings())
      code = code * rule_.network.cardinality(b.matching_var) +
             static_cast<std::uint64_t>(proto[b.matching_var]);
    return code;
  }

  const std::vector<RoleBinding>& peer_bindings() const {
    return driver_first_ ? rule_.second : rule_.first;
  }

  static void put_value(std::string& key, int v) {
    key.push_back(static_cast<char>(v & 0xff));
    key.push_back(static_cast<char>((v >> 8) & 0xff));
  }

  // Uniform draw from the candidates, accepted with probability
  // compatibility / max compatibility; rejected candidates are dropped.
  std::optional<AgentId> fallback(AgentId d, std::vector<AgentId> pool,
                                  RuleReport& report) {
    const Agent& driver = store_.agent(d);
    std::vector<double> compat(pool.size());
    double best = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const Agent& other = store_.agent(pool[i]);
      compat[i] = driver_first_ ? cached_compatibility(driver, other)
                                : cached_compatibility(other, driver);
      best = std::max(best, compat[i]);
    }
    if (!(best > 0.0)) {
      report.fallback_rejections += pool.size();
      return std::nullopt;
    }
    while (!pool.empty()) {
      std::size_t i = static_cast<std::size_t>(rng_.below(pool.size()));
      if (rng_.uniform() < compat[i] / best) return pool[i];
      ++report.fallback_rejections;
      pool[i] = pool.back();
      compat[i] = compat.back();
      pool.pop_back();
      compat.pop_back();
    }
    return std::nullopt;
  }

  double cached_compatibility(const Agent& a1, const Agent& a2) {
    std::string key;
    for (const RoleBinding& b : rule_.first) put_value(key, a1.values[b.attribute_var]);
    for (const RoleBinding& b : rule_.second) put_value(key, a2.values[b.attribute_var]);
    auto it = compat_.find(key);
    if (it != compat_.end()) return it->second;
    double c = compatibility(rule_, a1, a2);
    compat_.emplace(std::move(key), c);
    return c;
  }

  PopulationStore& store_;
  const HomophilyRule& rule_;
  RandomStream& rng_;
  PosteriorCache cache_;
  LinkTypeId type_;
  bool driver_first_;
  std::unordered_map<std::string, double> compat_;
};

}  // namespace

CandidateSets derive_candidate_sets(const HomophilyRule& rule,
                                    const PopulationStore& store) {
  Evidence ev = link_evidence(rule);
  if (!(probability_of_evidence(rule.network, ev) > 0.0))
    throw ZeroEvidenceError("link '" + rule.link_type + "' can never be created");
  std::vector<std::vector<double>> post(rule.network.size());
  auto fn = [&](VarId v) -> const std::vector<double>& {
    if (post[v].empty()) post[v] = posterior(rule.network, ev, v);
    return post[v];
  };
  LinkTypeId t = store.link_type_id(rule.link_type);
  CandidateSets sets;
  sets.first.attributes = support_constraints(rule.first, store.attribute_bn(), fn);
  sets.second.attributes = support_constraints(rule.second, store.attribute_bn(), fn);
  add_side_constraints(sets.first, rule, t, false);
  add_side_constraints(sets.second, rule, t, true);
  return sets;
}

CandidateQuery conditional_candidates(const HomophilyRule& rule,
                                      const PopulationStore& store,
                                      const Agent& driver, bool driver_is_first) {
  PosteriorCache cache(rule.network, 4096);
  return conditional_query(rule, store, driver, driver_is_first, cache);
}

double compatibility(const HomophilyRule& rule, const Agent& a1,
                     const Agent& a2) {
  Evidence ev(rule.network.size());
  add_agent_evidence(ev, rule.first, a1);
  add_agent_evidence(ev, rule.second, a2);
  if (!(probability_of_evidence(rule.network, ev) > 0.0)) return 0.0;
  return posterior(rule.network, ev, rule.link_variable)[static_cast<std::size_t>(
      rule.link_yes)];
}

RuleReport run_homophily_rule(PopulationStore& store, const HomophilyRule& rule,
                              RandomStream& rng) {
  return Matcher(store, rule, rng).run();
}

}  // namespace popnet
