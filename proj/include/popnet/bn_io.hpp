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
#include <string>
#include <string_view>

#include "popnet/bn.hpp"

namespace popnet {

// Parses the line-oriented BN text format:
//
//   variable <name> { <v1>, <v2>, ... }
//   cpt <child> [| <parent1>, <parent2>, ...] {
//     [<pv1>, <pv2>, ... :] <p1>, <p2>, ...
//   }
//
// `#` starts a comment. Rows within kRowSumTolerance of 1 are renormalized.
// Throws ParseError for grammar and reference errors, ValidationError for
// probability and structure errors.
BayesianNetwork parse_bn(std::string_view text);

BayesianNetwork load_bn_file(const std::filesystem::path& path);

// Canonical form: variables in declaration order, then one CPT per variable
// with rows in table order and shortest round-trip decimals.
std::string serialize_bn(const BayesianNetwork& bn);

// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace popnet
