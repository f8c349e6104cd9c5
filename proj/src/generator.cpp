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

#include "popnet/generator.hpp"

#include <chrono>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"
#include "popnet/matching.hpp"
#include "popnet/rng.hpp"
#include "popnet/transitivity.hpp"

namespace popnet {
namespace fs = std::filesystem;

GenerationPlan with_overrides(GenerationPlan plan, const PlanOverrides& overrides) {
  if (overrides.seed) plan.seed = *overrides.seed;
  if (overrides.population) plan.population = *overrides.population;
  if (overrides.output) plan.output = *overrides.output;
  return plan;
}

namespace {

HomophilyRule bind_rule(const HomophilyEntry& entry, const GenerationPlan& plan,
                        const BayesianNetwork& attributes) {
  HomophilyRule rule = load_homophily_rule(entry.network_file, attributes);
  if (rule.link_type != entry.link_type)
    throw ValidationError(entry.network_file.string() + ": matching network is for '" +
                          rule.link_type + "', not '" + entry.link_type + "'");
  rule.counts = entry.counts;
  rule.retry_budget = entry.retries.value_or(plan.retry_budget);
  rule.small_set_threshold = entry.small_set.value_or(plan.small_set_threshold);
  rule.max_incoming = entry.max_incoming;
  return rule;
}

std::uint64_t stats_seed(std::uint64_t seed) {
  return RandomStream(seed).split("stats").seed();
}

}  // namespace

GenerationResult run_generation(const GenerationPlan& plan, std::ostream* progress,
                                bool statistics) {
  for (const Diagnostic& d : validate_plan(plan))
    if (d.severity == Severity::Error) throw ValidationError(format_diagnostic(d));

  BayesianNetwork attributes = load_bn_file(plan.attributes);
  std::vector<HomophilyRule> homophily;
  for (const PlanRule& r : plan.rules)
    if (const auto* h = std::get_if<HomophilyEntry>(&r.body))
      homophily.push_back(bind_rule(*h, plan, attributes));

  RandomStream master(plan.seed);
  RandomStream population_rng = master.split("population");
  PopulationStore store =
      generate_population(attributes, plan.declared_types(), plan.population, population_rng);
  if (progress)
    *progress << "population: " << store.size() << " agents\n" << std::flush;

  GenerationReport report;
  report.population = plan.population;
  report.seed = plan.seed;
  std::size_t next_homophily = 0;
  for (std::size_t i = 0; i < plan.rules.size(); ++i) {
    const PlanRule& r = plan.rules[i];
    RandomStream rng = master.split("rule:" + std::to_string(i) + ":" + r.link_type());
    auto started = std::chrono::steady_clock::now();
    RuleReport rr;
    if (std::holds_alternative<HomophilyEntry>(r.body)) {
      rr = run_homophily_rule(store, homophily[next_homophily++], rng);
    } else {
      rr = run_transitivity_rule(store, std::get<TransitivityRule>(r.body), rng);
    }
    if (progress) {
      *progress << "rule " << i + 1 << "/" << plan.rules.size() << " "
                << (rr.kind == RuleKind::Homophily ? "homophily " : "transitive ")
                << rr.link_type << ": created=" << rr.created
                << " required=" << rr.required;
      if (rr.kind == RuleKind::Homophily)
        *progress << " unfulfilled=" << rr.unfulfilled << " orphans=" << rr.orphans;
      if (rr.vacuous) *progress << " (vacuous)";
      std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
      *progress << " (" << took.count() << " s)\n" << std::flush;
    }
    report.rules.push_back(std::move(rr));
  }

  LearnedNetwork learned = learn_marginals(store, attributes);
  report.errors.distribution = distribution_error(store, attributes);
  report.errors.matching = matching_error(report.rules);
  if (statistics) {
    NetworkSummary summary = summarize_network(store, stats_seed(plan.seed));
    report.collapsed = summary.collapsed;
    report.per_type = std::move(summary.per_type);
  }
  return {std::move(store), std::move(report), std::move(learned.network)};
}

std::vector<fs::path> export_generation(const GenerationResult& result,
                                        const GenerationPlan& plan, const fs::path& dir) {
  std::vector<fs::path> written = export_network(result.store, dir);
  if (!plan.interaction.empty())
    written.push_back(export_interaction_network(result.store, plan.interaction, dir));
  for (fs::path& p : export_reports(result.report, result.learned, dir))
    written.push_back(std::move(p));
  return written;
}

NetworkSummary summarize_network(const PopulationStore& store, std::uint64_t seed) {
  NetworkSummary s;
  s.collapsed = graph_statistics(store, std::nullopt, seed);
  for (LinkTypeId t = 0; t < store.link_types().size(); ++t)
    s.per_type[store.link_types()[t].name] = graph_statistics(store, t, seed);
  return s;
}

NetworkSummary summarize_network(const ExportedNetwork& network, std::uint64_t seed) {
  std::map<std::string, std::vector<std::pair<NodeId, NodeId>>> by_type;
  std::vector<std::pair<NodeId, NodeId>> all;
  for (const EdgeRecord& e : network.edges) {
    by_type[e.type].emplace_back(e.source, e.target);
    all.emplace_back(e.source, e.target);
  }
  for (const std::string& type : network.types) by_type[type];
  NetworkSummary s;
  s.collapsed = graph_statistics(UndirectedGraph(network.agents, all), seed);
  for (const auto& [type, edges] : by_type)
    s.per_type[type] = graph_statistics(UndirectedGraph(network.agents, edges), seed);
  return s;
}

}  // namespace popnet
