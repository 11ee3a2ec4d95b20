#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "lrdnet/errors.hpp"

namespace lrdnet {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Undirected simple graph stored as sorted adjacency lists.
class Graph {
public:
  Graph() = default;

  /// Builds a graph from an edge list. Self-loops and duplicate edges are
  /// rejected; (u, v) and (v, u) count as the same edge.
  static Graph from_edges(std::size_t n_vertices, std::span<const Edge> edges) {
    Graph g;
    g.adj_.resize(n_vertices);
    for (auto [u, v] : edges) {
      if (u >= n_vertices || v >= n_vertices)
        throw InvalidArgument("edge endpoint out of range");
      if (u == v) throw InvalidArgument("self-loop on vertex " + std::to_string(u));
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    for (auto& nbrs : g.adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
        throw InvalidArgument("duplicate edge");
    }
    g.n_edges_ = edges.size();
    return g;
  }

  std::size_t vertex_count() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return n_edges_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  /// Edges with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(n_edges_);
    for (Vertex u = 0; u < adj_.size(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  std::vector<std::vector<Vertex>> adj_;
  std::size_t n_edges_ = 0;
};

/// Dense table of hop counts. Unreachable pairs hold `unreachable`.
class DistanceMatrix {
public:
  using value_type = std::uint32_t;
  static constexpr value_type unreachable = std::numeric_limits<value_type>::max();

  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), dist_(n * n, unreachable) {}

  std::size_t size() const noexcept { return n_; }
  value_type operator()(std::size_t s, std::size_t t) const { return dist_[s * n_ + t]; }
  value_type& operator()(std::size_t s, std::size_t t) { return dist_[s * n_ + t]; }
  bool reachable(std::size_t s, std::size_t t) const { return (*this)(s, t) != unreachable; }

  std::span<const value_type> row(std::size_t s) const {
    return std::span<const value_type>(dist_).subspan(s * n_, n_);
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<value_type> dist_;
};

/// Single-source BFS hop counts into `row` (length n, pre-filled with unreachable).
inline void bfs_distances(const Graph& g, Vertex source, std::span<DistanceMatrix::value_type> row) {
  std::vector<Vertex> frontier{source};
  frontier.reserve(g.vertex_count());
  row[source] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const Vertex u = frontier[head];
    for (Vertex v : g.neighbors(u)) {
      if (row[v] == DistanceMatrix::unreachable) {
        row[v] = row[u] + 1;
        frontier.push_back(v);
      }
    }
  }
}

inline DistanceMatrix all_pairs_hop_distances(const Graph& g) {
  const std::size_t n = g.vertex_count();
  DistanceMatrix d(n);
  std::vector<DistanceMatrix::value_type> row(n);
  for (Vertex s = 0; s < n; ++s) {
    std::fill(row.begin(), row.end(), DistanceMatrix::unreachable);
    bfs_distances(g, s, row);
    for (std::size_t t = 0; t < n; ++t) d(s, t) = row[t];
  }
  return d;
}

/// Mean hop count over ordered reachable pairs s != t.
inline double characteristic_path_length(const DistanceMatrix& d) {
  double total = 0.0;
  std::uint64_t pairs = 0;
  for (std::size_t s = 0; s < d.size(); ++s) {
    for (std::size_t t = 0; t < d.size(); ++t) {
      if (s == t || !d.reachable(s, t)) continue;
      total += d(s, t);
      ++pairs;
    }
  }
  if (pairs == 0) throw NoReachablePairs("no reachable ordered pair of distinct vertices");
  return total / static_cast<double>(pairs);
}

/// Map from degree to the number of vertices with that degree.
using DegreeHistogram = std::map<std::size_t, std::size_t>;

inline DegreeHistogram degree_histogram(const Graph& g) {
  DegreeHistogram h;
  for (Vertex v = 0; v < g.vertex_count(); ++v) ++h[g.degree(v)];
  return h;
}

/// Component label per vertex; labels are assigned in order of each
/// component's smallest vertex.
inline std::vector<std::uint32_t> component_labels(const Graph& g, std::uint32_t* n_components = nullptr) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(g.vertex_count(), unset);
  std::vector<Vertex> stack;
  std::uint32_t next = 0;
  for (Vertex root = 0; root < g.vertex_count(); ++root) {
    if (label[root] != unset) continue;
    label[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v : g.neighbors(u)) {
        if (label[v] == unset) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (n_components) *n_components = next;
  return label;
}

struct Subgraph {
  Graph graph;
  /// Old index -> new index; vertices outside the subgraph map to `absent`.
  std::vector<std::uint32_t> vertex_map;
  static constexpr std::uint32_t absent = std::numeric_limits<std::uint32_t>::max();
};

/// Largest connected component, relabeled 0..n'-1 in original index order.
/// Equal-size components are resolved in favour of the one holding the
/// smallest original vertex index.
inline Subgraph giant_component(const Graph& g) {
  std::uint32_t n_comp = 0;
  const auto label = component_labels(g, &n_comp);
  std::vector<std::size_t> size(n_comp, 0);
  for (auto l : label) ++size[l];
  // Labels follow smallest-member order, so the first maximum wins ties.
  const auto best = static_cast<std::uint32_t>(
      std::max_element(size.begin(), size.end()) - size.begin());

  Subgraph out;
  out.vertex_map.assign(g.vertex_count(), Subgraph::absent);
  std::uint32_t next = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (n_comp > 0 && label[v] == best) out.vertex_map[v] = next++;

  std::vector<Edge> edges;
  for (auto [u, v] : g.edges())
    if (out.vertex_map[u] != Subgraph::absent)
      edges.emplace_back(out.vertex_map[u], out.vertex_map[v]);
  out.graph = Graph::from_edges(next, edges);
  return out;
}

inline bool is_connected(const Graph& g) {
  std::uint32_t n_comp = 0;
  component_labels(g, &n_comp);
  return n_comp <= 1;
}

}  // namespace lrdnet
