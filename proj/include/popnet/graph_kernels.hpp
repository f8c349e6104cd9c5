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
#include <span>
#include <utility>
#include <vector>

namespace popnet {

using NodeId = std::uint32_t;

// Simple undirected graph in CSR form: sorted neighbour lists, no self
// loops, no parallel edges.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  // Self loops are dropped and repeated pairs (either orientation) merged.
  UndirectedGraph(std::size_t num_nodes,
                  std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return adj_.size() / 2; }
  std::span<const NodeId> neighbors(NodeId u) const {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adj_;
};

// Data-parallel kernels behind the network statistics. Each has an OpenMP
// version and a single-threaded reference with identical results; integer
// accumulation keeps both bit-identical regardless of thread count.
namespace kernels {

std::uint64_t count_triangles(const UndirectedGraph& g);
std::uint64_t count_triangles_serial(const UndirectedGraph& g);

// Paths of length two, sum over nodes of d(d-1)/2.
std::uint64_t connected_triples(const UndirectedGraph& g);

struct Components {
  std::vector<std::uint32_t> label;  // per node, labels 0..count-1
  std::size_t count = 0;
  std::vector<std::size_t> sizes;
};
Components connected_components(const UndirectedGraph& g);

struct DistanceSum {
  std::uint64_t total = 0;  // sum of BFS distances to reachable nodes
  std::uint64_t pairs = 0;  // number of (source, target) pairs, target != source
};

// BFS from every source, summing geodesic distances.
DistanceSum distance_sum(const UndirectedGraph& g, std::span<const NodeId> sources);
DistanceSum distance_sum_serial(const UndirectedGraph& g,
                                std::span<const NodeId> sources);

}  // namespace kernels
}  // namespace popnet
