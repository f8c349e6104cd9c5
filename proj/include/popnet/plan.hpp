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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "popnet/export.hpp"
#include "popnet/matching.hpp"
#include "popnet/population.hpp"
#include "popnet/transitivity.hpp"

namespace popnet {

struct HomophilyEntry {
  std::string link_type;
  std::filesystem::path network_file;  // resolved against the plan directory
  CountedEndpoints counts = CountedEndpoints::Both;
  std::optional<int> retries;
  std::optional<std::size_t> small_set;
  std::optional<int> max_incoming;
};

struct PlanRule {
  std::variant<HomophilyEntry, TransitivityRule> body;
  std::size_t line = 0;

  const std::string& link_type() const;
};

struct PlanLinkType {
  LinkType type;
  std::size_t line = 0;
};

// Plan text, one directive per line, `#` comments:
//
//   population N=<int> seed=<int> attributes=<bnfile>
//   linktype <name> <directed|undirected>
//   rule homophily <type> bn=<file> counts=<both|a1|a2> [retries=<int>]
//        [smallset=<int>] [max_in=<int>]
//   rule transitive <t3> from <t1> <t2> p=<prob> pattern=<r1>,<r2>
//   interact <type> p=<prob>
//   matcher retries=<int> smallset=<int>
//   output <dir>
struct GenerationPlan {
  std::size_t population = 0;
  std::uint64_t seed = 0;
  std::filesystem::path attributes;
  std::vector<PlanLinkType> link_types;
  std::vector<PlanRule> rules;
  InteractionWeights interaction;
  int retry_budget = kDefaultRetryBudget;
  std::size_t small_set_threshold = kDefaultSmallSetThreshold;
  std::filesystem::path output = "out";

  std::vector<LinkType> declared_types() const;
};

// Syntax only; relative paths are resolved against `base_dir`. Throws
// ParseError.
GenerationPlan parse_plan(std::string_view text, const std::filesystem::path& base_dir);
GenerationPlan load_plan(const std::filesystem::path& path);

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::size_t line = 0;  // 0 when not tied to a plan line
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

// Dry run: loads every referenced network and checks declarations, rule
// bindings, rule ordering and vacuity without generating anything.
std::vector<Diagnostic> validate_plan(const GenerationPlan& plan);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace popnet
