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
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "popnet/export.hpp"
#include "popnet/metrics.hpp"
#include "popnet/plan.hpp"
#include "popnet/population.hpp"
#include "popnet/report.hpp"

namespace popnet {

struct PlanOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> population;
  std::optional<std::filesystem::path> output;
};

GenerationPlan with_overrides(GenerationPlan plan, const PlanOverrides& overrides);

struct GenerationResult {
  PopulationStore store;
  GenerationReport report;
  BayesianNetwork learned;
};

// Loads the plan's networks, samples the population and applies every rule
// in order. Rule tallies go to `progress` when given. Without `statistics`
// the report's network statistics stay default. Throws ParseError or
// ValidationError for configuration problems.
GenerationResult run_generation(const GenerationPlan& plan,
                                std::ostream* progress = nullptr,
                                bool statistics = true);

// All artifacts of a run: network files, interaction network when the plan
// has weights, report and learned attribute network.
std::vector<std::filesystem::path> export_generation(const GenerationResult& result,
                                                     const GenerationPlan& plan,
                                                     const std::filesystem::path& dir);

struct NetworkSummary {
  NetworkStats collapsed;
  std::map<std::string, NetworkStats> per_type;
};

// Collapsed and per-type statistics; `seed` drives path-length sampling.
NetworkSummary summarize_network(const PopulationStore& store, std::uint64_t seed);
NetworkSummary summarize_network(const ExportedNetwork& network, std::uint64_t seed);

}  // namespace popnet
