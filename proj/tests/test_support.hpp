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
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "popnet/bn.hpp"
#include "popnet/inference.hpp"

namespace popnet::testing {

std::filesystem::path data_dir();
std::filesystem::path kenya_dir();
std::filesystem::path fixtures_dir();

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

// Brute-force reference computations over the full joint distribution. They
// read CPT tables directly and share no code with the inference engine.
namespace oracle {

// Every full assignment in lexicographic order (first variable slowest).
// Enumeration skips observed variables, so evidence shrinks the work.
std::vector<std::vector<int>> all_assignments(const BayesianNetwork& bn);

double joint(const BayesianNetwork& bn, const std::vector<int>& assignment);

bool consistent(const Evidence& ev, const std::vector<int>& assignment);

double evidence_probability(const BayesianNetwork& bn, const Evidence& ev);

// Every variable's posterior from one enumeration; empty when p(ev) == 0.
std::vector<std::vector<double>> posteriors(const BayesianNetwork& bn, const Evidence& ev);

// Empty vector when p(ev) == 0.
std::vector<double> posterior(const BayesianNetwork& bn, const Evidence& ev, VarId q);

}  // namespace oracle

struct RandomBnOptions {
  std::size_t max_variables = 10;
  std::size_t max_domain = 4;
  std::size_t max_parents = 3;
  double zero_probability = 0.15;  // chance that a CPT entry is forced to 0
};

// Random DAG declared in a shuffled order with random CPT rows.
BayesianNetwork random_network(std::mt19937_64& rng, const RandomBnOptions& options = {});

// Random hard evidence on up to `max_observed` variables, drawn so that it
// can be impossible.
Evidence random_evidence(std::mt19937_64& rng, const BayesianNetwork& bn,
                         std::size_t max_observed);

}  // namespace popnet::testing

namespace popnet::testing {

// Diamond A -> {B, C} -> D with 12 joint states; D is the leaf used as
// evidence in the sampling checks.
BayesianNetwork diamond_network();

struct FrequencyCheck {
  std::size_t cells = 0;
  std::size_t outside = 0;   // cells beyond `z` standard errors
  double worst_z = 0.0;
  std::size_t impossible_hits = 0;  // draws of zero-probability states
};

// Draws `draws` prototypes under `ev` and compares the empirical frequency
// of every full assignment with the exact conditional joint.
FrequencyCheck check_prototype_frequencies(const BayesianNetwork& bn, const Evidence& ev,
                                           std::size_t draws, std::uint64_t seed,
                                           double z);

}  // namespace popnet::testing

namespace popnet::testing {

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Random graph with up to `max_nodes` nodes, a random density, occasional
// self loops and repeated pairs, and usually several components.
EdgeList random_graph(std::mt19937_64& rng, std::size_t max_nodes, std::size_t& nodes);

// Statistics recomputed from an adjacency matrix: triple loops for
// triangles and Floyd-Warshall for path lengths.
struct GraphReference {
  std::size_t links = 0;
  double density = 0.0;
  double average_degree = 0.0;
  std::uint64_t triangles = 0;
  std::uint64_t connected_triples = 0;
  double clustering = 0.0;
  std::size_t components = 0;
  std::size_t largest_component = 0;
  bool has_path_length = false;
  double average_path_length = 0.0;  // over ordered pairs of the largest component
};

GraphReference reference_statistics(std::size_t nodes, const EdgeList& edges);

}  // namespace popnet::testing
