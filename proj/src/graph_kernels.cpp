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

#include "popnet/graph_kernels.hpp"

#include <algorithm>
#include <limits>

namespace popnet {

UndirectedGraph::UndirectedGraph(std::size_t num_nodes,
                                 std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  offsets_.assign(num_nodes + 1, 0);
  for (auto [u, v] : arcs) ++offsets_[u + 1];
  for (std::size_t i = 0; i < num_nodes; ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) adj_[i] = arcs[i].second;
}

namespace kernels {
namespace {

// Counts each triangle once as w < v < u using sorted neighbour lists.
std::uint64_t ordered_count_at(const UndirectedGraph& g, NodeId u) {
  std::uint64_t total = 0;
  auto nu = g.neighbors(u);
  for (NodeId v : nu) {
    if (v > u) break;
    auto it = nu.begin();
    for (NodeId w : g.neighbors(v)) {
      if (w > v) break;
      while (*it < w) ++it;
      if (w == *it) ++total;
    }
  }
  return total;
}

void bfs_from(const UndirectedGraph& g, NodeId s, std::vector<std::uint32_t>& dist,
              std::vector<NodeId>& queue, DistanceSum& acc) {
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  queue.clear();
  queue.push_back(s);
  dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] != kUnseen) continue;
      dist[v] = dist[u] + 1;
      acc.total += dist[v];
      ++acc.pairs;
      queue.push_back(v);
    }
  }
  for (NodeId u : queue) dist[u] = kUnseen;
}

}  // namespace

std::uint64_t count_triangles(const UndirectedGraph& g) {
  std::uint64_t total = 0;
  const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel for reduction(+ : total) schedule(dynamic, 64)
  for (std::int64_t u = 0; u < n; ++u)
    total += ordered_count_at(g, static_cast<NodeId>(u));
  return total;
}

std::uint64_t count_triangles_serial(const UndirectedGraph& g) {
  std::uint64_t total = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) total += ordered_count_at(g, u);
  return total;
}

std::uint64_t connected_triples(const UndirectedGraph& g) {
  std::uint64_t total = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    std::uint64_t d = g.degree(u);
    total += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  return total;
}

Components connected_components(const UndirectedGraph& g) {
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  Components c;
  c.label.assign(g.num_nodes(), kNone);
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (c.label[s] != kNone) continue;
    auto id = static_cast<std::uint32_t>(c.count++);
    std::size_t size = 0;
    stack.push_back(s);
    c.label[s] = id;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : g.neighbors(u))
        if (c.label[v] == kNone) {
          c.label[v] = id;
          stack.push_back(v);
        }
    }
    c.sizes.push_back(size);
  }
  return c;
}

DistanceSum distance_sum(const UndirectedGraph& g, std::span<const NodeId> sources) {
  std::uint64_t total = 0, pairs = 0;
  const auto n = static_cast<std::int64_t>(sources.size());
#pragma omp parallel reduction(+ : total, pairs)
  {
    std::vector<std::uint32_t> dist(g.num_nodes(),
                                    std::numeric_limits<std::uint32_t>::max());
    std::vector<NodeId> queue;
    DistanceSum local;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i)
      bfs_from(g, sources[static_cast<std::size_t>(i)], dist, queue, local);
    total += local.total;
    pairs += local.pairs;
  }
  return {total, pairs};
}

DistanceSum distance_sum_serial(const UndirectedGraph& g,
                                std::span<const NodeId> sources) {
  std::vector<std::uint32_t> dist(g.num_nodes(),
                                  std::numeric_limits<std::uint32_t>::max());
  std::vector<NodeId> queue;
  DistanceSum acc;
  for (NodeId s : sources) bfs_from(g, s, dist, queue, acc);
  return acc;
}

}  // namespace kernels
}  // namespace popnet
