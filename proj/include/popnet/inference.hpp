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

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "popnet/bn.hpp"

namespace popnet {

// Hard evidence: at most one asserted value per variable. Stored dense by
// variable index, -1 meaning "not observed".
class Evidence {
 public:
  Evidence() = default;
  explicit Evidence(std::size_t num_vars) : values_(num_vars, -1) {}

  // Throws UnknownVariableError for names or labels outside the network.
  static Evidence from_labels(
      const BayesianNetwork& bn,
      const std::vector<std::pair<std::string, std::string>>& assertions);

  // Throws Error when `var` already carries a different value.
  void set(VarId var, int value);
  void set(const BayesianNetwork& bn, std::string_view var,
           std::string_view label);
  void clear(VarId var) {
    if (var < values_.size()) values_[var] = -1;
  }

  bool has(VarId var) const { return value(var) >= 0; }
  int value(VarId var) const {
    return var < values_.size() ? values_[var] : -1;
  }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::span<const int> values() const { return values_; }

  friend bool operator==(const Evidence& a, const Evidence& b);

 private:
  std::vector<int> values_;
};

struct Posterior {
  std::string variable;
  std::vector<double> probabilities;
};

// Exact p(query | evidence) by variable elimination over the ancestors of
// the query and evidence. Throws ZeroEvidenceError when p(evidence) == 0 and
// UnknownVariableError for an out-of-range query or evidence entry.
std::vector<double> posterior(const BayesianNetwork& bn, const Evidence& ev,
                              VarId query);
Posterior posterior(const BayesianNetwork& bn, const Evidence& ev,
                    std::string_view query);

double probability_of_evidence(const BayesianNetwork& bn, const Evidence& ev);

// Product of CPT entries for a full assignment (one value index per
// variable). Throws IncompleteAssignmentError.
double joint_probability(const BayesianNetwork& bn,
                         std::span<const int> assignment);

}  // namespace popnet
