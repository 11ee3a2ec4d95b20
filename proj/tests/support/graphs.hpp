#pragma once

// Small named graphs and independent reference computations shared by tests.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lrdnet/graph.hpp"
#include "lrdnet/random.hpp"

namespace lrdnet::testing {

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.emplace_back(i, static_cast<Vertex>((i + 1) % n));
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

/// Hub 0 joined to `leaves` leaves.
inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

inline Graph petersen_graph() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  return Graph::from_edges(10, e);
}

/// G(n, p) sample; each pair included independently.
inline Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (rng.uniform() < p) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

/// G(n, p) conditioned on connectivity by rejection.
inline Graph random_connected_graph(std::size_t n, double p, Rng& rng) {
  while (true) {
    Graph g = random_graph(n, p, rng);
    if (is_connected(g)) return g;
  }
}

/// Floyd-Warshall over the adjacency matrix; independent of BFS.
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(const Graph& g) {
  constexpr std::uint32_t inf = DistanceMatrix::unreachable;
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
  for (Vertex u = 0; u < n; ++u) {
    d[u][u] = 0;
    for (Vertex v : g.neighbors(u)) d[u][v] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] != inf && d[k][j] != inf && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Component sizes by union-find, sorted descending.
inline std::vector<std::size_t> component_sizes_union_find(const Graph& g) {
  std::vector<std::size_t> parent(g.vertex_count());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : g.edges()) parent[find(u)] = find(v);
  std::vector<std::size_t> size(g.vertex_count(), 0);
  for (std::size_t i = 0; i < parent.size(); ++i) ++size[find(i)];
  std::erase(size, 0);
  std::sort(size.rbegin(), size.rend());
  return size;
}

/// Calls fn(graph) for every connected graph on n vertices, up to
/// isomorphism coverage: every labeled graph whose degrees are non-increasing
/// in vertex index. Each isomorphism class has at least one such labeling.
template <class Fn>
void for_each_connected_graph(std::size_t n, Fn&& fn) {
  std::vector<Edge> pairs;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  std::vector<Edge> edges;
  std::vector<std::size_t> degree(n);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::fill(degree.begin(), degree.end(), 0);
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask >> b & 1) {
        ++degree[pairs[b].first];
        ++degree[pairs[b].second];
      }
    if (!std::is_sorted(degree.rbegin(), degree.rend())) continue;
    if (n > 1 && degree[n - 1] == 0) continue;
    edges.clear();
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask >> b & 1) edges.push_back(pairs[b]);
    Graph g = Graph::from_edges(n, edges);
    if (is_connected(g)) fn(g);
  }
}

}  // namespace lrdnet::testing
