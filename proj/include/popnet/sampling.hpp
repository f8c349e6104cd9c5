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
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "popnet/bn.hpp"
#include "popnet/inference.hpp"
#include "popnet/rng.hpp"

namespace popnet {

// One value index per network variable.
using Prototype = std::vector<int>;

std::map<std::string, std::string> to_labels(const BayesianNetwork& bn,
                                             const Prototype& prototype);

// Memoizes posteriors of one network keyed by the evidence state. Prototype
// draws under similar evidence revisit the same states many times.
class PosteriorCache {
 public:
  explicit PosteriorCache(const BayesianNetwork& bn,
                          std::size_t max_entries = std::size_t{1} << 20)
      : bn_(&bn), max_entries_(max_entries) {}

  const std::vector<double>& posterior(const Evidence& ev, VarId query);
  double probability_of_evidence(const Evidence& ev);

  const BayesianNetwork& network() const { return *bn_; }
  std::size_t size() const { return posteriors_.size() + evidence_.size(); }

 private:
  std::string key(const Evidence& ev, VarId query) const;

  const BayesianNetwork* bn_;
  std::size_t max_entries_;
  std::unordered_map<std::string, std::vector<double>> posteriors_;
  std::unordered_map<std::string, double> evidence_;
};

// Draws a full assignment from p(. | ev): variables are visited in
// topological order, each unobserved one is drawn by inverse CDF from its
// posterior under the evidence accumulated so far, and the draw is added as
// evidence. Throws ZeroEvidenceError when p(ev) == 0.
Prototype sample_prototype(const BayesianNetwork& bn, const Evidence& ev,
                           RandomStream& rng);
Prototype sample_prototype(PosteriorCache& cache, const Evidence& ev,
                           RandomStream& rng);

}  // namespace popnet
