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

#include "popnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "popnet/rng.hpp"

namespace popnet {

NetworkStats graph_statistics(const UndirectedGraph& g, std::uint64_t seed) {
  return graph_statistics(g, seed, kExactPathLengthLimit, kPathLengthSamples);
}

NetworkStats graph_statistics(const UndirectedGraph& g, std::uint64_t seed,
                              std::size_t exact_limit, std::size_t samples) {
  NetworkStats s;
  s.nodes = g.num_nodes();
  s.links = g.num_edges();
  if (s.nodes >= 2) {
    double n = static_cast<double>(s.nodes);
    double l = static_cast<double>(s.links);
    s.density = 2.0 * l / (n * (n - 1.0));
  }
  if (s.nodes > 0)
    s.average_degree = 2.0 * static_cast<double>(s.links) / static_cast<double>(s.nodes);

  s.triangles = kernels::count_triangles(g);
  s.connected_triples = kernels::connected_triples(g);
  if (s.connected_triples > 0)
    s.clustering = 3.0 * static_cast<double>(s.triangles) /
                   static_cast<double>(s.connected_triples);

  auto comps = kernels::connected_components(g);
  s.components = comps.count;
  if (comps.count == 0) return s;
  // Largest component; the lowest label wins ties.
  auto biggest = static_cast<std::uint32_t>(
      std::max_element(comps.sizes.begin(), comps.sizes.end()) - comps.sizes.begin());
  s.largest_component = comps.sizes[biggest];
  if (s.largest_component < 2) return s;

  std::vector<NodeId> members;
  members.reserve(s.largest_component);
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    if (comps.label[u] == biggest) members.push_back(u);

  std::span<const NodeId> sources = members;
  std::vector<NodeId> sampled;
  if (members.size() > exact_limit && samples < members.size()) {
    // Partial Fisher-Yates: `samples` distinct sources.
    RandomStream rng = RandomStream(seed).split("path-length-sources");
    sampled = members;
    for (std::size_t i = 0; i < samples; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(sampled.size() - i));
      std::swap(sampled[i], sampled[j]);
    }
    sampled.resize(samples);
    sources = sampled;
    s.path_length_estimated = true;
  }
  auto d = kernels::distance_sum(g, sources);
  s.average_path_length =
      static_cast<double>(d.total) / static_cast<double>(d.pairs);
  return s;
}

UndirectedGraph network_graph(const PopulationStore& store,
                              std::optional<LinkTypeId> type) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(store.links().size());
  for (const Link& l : store.links())
    if (!type || l.type == *type) edges.emplace_back(l.source, l.target);
  return UndirectedGraph(store.size(), edges);
}

NetworkStats graph_statistics(const PopulationStore& store,
                              std::optional<LinkTypeId> type, std::uint64_t seed) {
  return graph_statistics(network_graph(store, type), seed);
}

DistributionError distribution_error(const PopulationStore& store,
                                     const BayesianNetwork& attribute_bn) {
  DistributionError out;
  if (store.size() == 0) return out;
  LearnedNetwork learned = learn_marginals(store, attribute_bn);
  double sum = 0.0;
  std::size_t entries = 0;
  for (VarId v = 0; v < attribute_bn.size(); ++v) {
    for (std::size_t r = 0; r < attribute_bn.row_count(v); ++r) {
      if (!learned.observed[v][r]) continue;
      ++out.observed_rows;
      auto theory = attribute_bn.row(v, r);
      auto measured = learned.network.row(v, r);
      for (std::size_t k = 0; k < theory.size(); ++k)
        sum += std::abs(theory[k] - measured[k]);
      entries += theory.size();
    }
  }
  out.unobserved_rows = learned.unobserved_rows;
  if (entries > 0) out.mean_absolute_error = sum / static_cast<double>(entries);
  return out;
}

std::map<std::string, double> matching_error(const std::vector<RuleReport>& reports) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  for (const RuleReport& r : reports) {
    if (r.kind != RuleKind::Homophily) continue;
    auto& [unfulfilled, required] = tally[r.link_type];
    unfulfilled += r.unfulfilled;
    required += r.required;
  }
  std::map<std::string, double> out;
  for (const auto& [type, t] : tally)
    out[type] = t.second == 0 ? 0.0
                              : static_cast<double>(t.first) /
                                    static_cast<double>(t.second);
  return out;
}

}  // namespace popnet
