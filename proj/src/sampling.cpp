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

#include "popnet/sampling.hpp"

#include "popnet/errors.hpp"

namespace popnet {

std::map<std::string, std::string> to_labels(const BayesianNetwork& bn,
                                             const Prototype& prototype) {
  std::map<std::string, std::string> out;
  for (VarId v = 0; v < bn.size() && v < prototype.size(); ++v)
    if (prototype[v] >= 0) out[bn.name(v)] = bn.variable(v).domain[prototype[v]];
  return out;
}

std::string PosteriorCache::key(const Evidence& ev, VarId query) const {
  std::string k;
  k.reserve(2 * bn_->size() + 2);
  auto put = [&k](std::size_t x) {
    k.push_back(static_cast<char>(x & 0xff));
    k.push_back(static_cast<char>(x >> 8));
  };
  put(query == BayesianNetwork::npos ? 0xffff : query);
  for (VarId v = 0; v < bn_->size(); ++v)
    put(static_cast<std::size_t>(ev.value(v) + 1));
  return k;
}

const std::vector<double>& PosteriorCache::posterior(const Evidence& ev,
                                                     VarId query) {
  std::string k = key(ev, query);
  auto it = posteriors_.find(k);
  if (it != posteriors_.end()) return it->second;
  if (size() >= max_entries_) {
    posteriors_.clear();
    evidence_.clear();
  }
  return posteriors_.emplace(std::move(k), popnet::posterior(*bn_, ev, query))
      .first->second;
}

double PosteriorCache::probability_of_evidence(const Evidence& ev) {
  std::string k = key(ev, BayesianNetwork::npos);
  auto it = evidence_.find(k);
  if (it != evidence_.end()) return it->second;
  if (size() >= max_entries_) {
    posteriors_.clear();
    evidence_.clear();
  }
  double p = popnet::probability_of_evidence(*bn_, ev);
  evidence_.emplace(std::move(k), p);
  return p;
}

Prototype sample_prototype(PosteriorCache& cache, const Evidence& ev,
                           RandomStream& rng) {
  const BayesianNetwork& bn = cache.network();
  if (!(cache.probability_of_evidence(ev) > 0.0))
    throw ZeroEvidenceError("cannot sample under zero-probability evidence");
  Evidence acc(bn.size());
  for (VarId v = 0; v < bn.size(); ++v)
    if (ev.has(v)) acc.set(v, ev.value(v));
  for (VarId v : bn.topological_order()) {
    if (acc.has(v)) continue;
    const auto& probs = cache.posterior(acc, v);
    acc.set(v, static_cast<int>(rng.pick(probs)));
  }
  return Prototype(acc.values().begin(), acc.values().end());
}

Prototype sample_prototype(const BayesianNetwork& bn, const Evidence& ev,
                           RandomStream& rng) {
  PosteriorCache cache(bn, 1024);
  return sample_prototype(cache, ev, rng);
}

}  // namespace popnet
