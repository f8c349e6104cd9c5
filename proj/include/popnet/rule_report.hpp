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

#include <cstddef>
#include <string>

namespace popnet {

enum class RuleKind { Homophily, Transitive };

// Tallies of one rule execution. For homophily rules `required` counts the
// link slots demanded by the driving agents when they are processed, so
// created + unfulfilled == required. For transitive rules `required` is the
// number of eligible dyads.
struct RuleReport {
  std::string link_type;
  RuleKind kind = RuleKind::Homophily;
  std::size_t created = 0;
  std::size_t required = 0;
  std::size_t unfulfilled = 0;
  std::size_t orphans = 0;
  std::size_t prototype_successes = 0;
  std::size_t fallback_successes = 0;
  std::size_t fallback_rejections = 0;
  bool vacuous = false;

  friend bool operator==(const RuleReport&, const RuleReport&) = default;
};

}  // namespace popnet
