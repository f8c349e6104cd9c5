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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "popnet/bn.hpp"
#include "popnet/graph_kernels.hpp"
#include "popnet/population.hpp"
#include "popnet/rule_report.hpp"

namespace popnet {

// Components up to this size get exact all-pairs path lengths.
inline constexpr std::size_t kExactPathLengthLimit = 20000;
inline constexpr std::size_t kPathLengthSamples = 1000;

struct NetworkStats {
  std::size_t nodes = 0;
  std::size_t links = 0;
  double density = 0.0;
  double average_degree = 0.0;
  double clustering = 0.0;  // 3 * triangles / connected triples
  std::uint64_t triangles = 0;
  std::uint64_t connected_triples = 0;
  std::size_t components = 0;
  std::size_t largest_component = 0;
  // Mean geodesic over ordered pairs of the largest component; absent when
  // it has fewer than two nodes.
  std::optional<double> average_path_length;
  bool path_length_estimated = false;
};

// Statistics of `g` as an undirected simple graph. `seed` drives the source
// sample used when the largest component exceeds kExactPathLengthLimit.
NetworkStats graph_statistics(const UndirectedGraph& g, std::uint64_t seed = 0);
// Same with an explicit exact/sampled threshold.
NetworkStats graph_statistics(const UndirectedGraph& g, std::uint64_t seed,
                              std::size_t exact_limit, std::size_t samples);

// Collapsed (all types, directions ignored) or a single link type.
UndirectedGraph network_graph(const PopulationStore& store,
                              std::optional<LinkTypeId> type = std::nullopt);
NetworkStats graph_statistics(const PopulationStore& store,
                              std::optional<LinkTypeId> type = std::nullopt,
                              std::uint64_t seed = 0);

struct DistributionError {
  double mean_absolute_error = 0.0;
  std::size_t observed_rows = 0;
  std::size_t unobserved_rows = 0;
};

// Mean |learned - theoretical| over every CPT entry of rows with observed
// parent support.
DistributionError distribution_error(const PopulationStore& store,
                                     const BayesianNetwork& attribute_bn);

// Unfulfilled over demanded link slots, per homophily link type.
std::map<std::string, double> matching_error(const std::vector<RuleReport>& reports);

struct ErrorReport {
  DistributionError distribution;
  std::map<std::string, double> matching;
};

}  // namespace popnet
