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
#include <string>
#include <string_view>
#include <vector>

#include "popnet/metrics.hpp"
#include "popnet/rule_report.hpp"

namespace popnet {

// Everything a generation run reports besides the artifacts themselves.
struct GenerationReport {
  std::size_t population = 0;
  std::uint64_t seed = 0;
  std::vector<RuleReport> rules;
  ErrorReport errors;
  NetworkStats collapsed;
  std::map<std::string, NetworkStats> per_type;
};

// Flat `key=value` lines in a fixed order, doubles in shortest round-trip
// form. parse_report(format_report(r)) reproduces r exactly.
std::string format_report(const GenerationReport& report);
GenerationReport parse_report(std::string_view text);

// The `stats.<scope>.*` lines of format_report for one scope.
std::string format_stats(std::string_view scope, const NetworkStats& stats);

std::map<std::string, std::string> parse_key_values(std::string_view text);

}  // namespace popnet
