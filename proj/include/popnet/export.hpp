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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "popnet/population.hpp"
#include "popnet/report.hpp"

namespace popnet {

// Networks with more agents than this get no graph-description file.
inline constexpr std::size_t kGraphDescriptionLimit = 2000;

// Link-type name -> probability that linked agents interact.
using InteractionWeights = std::map<std::string, double>;

struct EdgeRecord {
  AgentId source = 0;
  AgentId target = 0;
  std::string type;
  friend auto operator<=>(const EdgeRecord&, const EdgeRecord&) = default;
};

// Every link, sorted by type name, then source, then target. Undirected links
// are stored with the smaller id as source.
std::vector<EdgeRecord> canonical_edges(const PopulationStore& store);

std::string agents_csv(const PopulationStore& store);
std::string edges_csv(const PopulationStore& store, LinkTypeId type);
std::string all_edges_csv(const PopulationStore& store);
std::string graph_description(const PopulationStore& store);
// Throws Error when a type with links has no weight, or a weight is outside
// [0,1].
std::string interaction_csv(const PopulationStore& store,
                            const InteractionWeights& weights);

// Writes agents.csv, edges_<type>.csv per declared type, edges_all.csv and,
// for small populations, network.dot. Returns the written paths. Throws
// Error when the directory cannot be written.
std::vector<std::filesystem::path> export_network(const PopulationStore& store,
                                                  const std::filesystem::path& dir);

std::filesystem::path export_interaction_network(const PopulationStore& store,
                                                 const InteractionWeights& weights,
                                                 const std::filesystem::path& dir);

// Writes report.txt and learned_attributes.bn.
std::vector<std::filesystem::path> export_reports(const GenerationReport& report,
                                                  const BayesianNetwork& learned,
                                                  const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);

// Parses `source,target,type` rows (the edges_all.csv layout).
std::vector<EdgeRecord> parse_all_edges_csv(std::string_view text);
// Parses `source,target` rows of a per-type file.
std::vector<EdgeRecord> parse_edges_csv(std::string_view text, const std::string& type);

// Agents and links of a previously exported directory.
struct ExportedNetwork {
  std::size_t agents = 0;
  std::vector<std::string> types;  // from the edges_<type>.csv files, sorted
  std::vector<EdgeRecord> edges;
};

ExportedNetwork read_exported_network(const std::filesystem::path& dir);

}  // namespace popnet
