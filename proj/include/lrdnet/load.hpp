#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "lrdnet/errors.hpp"
#include "lrdnet/format.hpp"
#include "lrdnet/graph.hpp"

namespace lrdnet {

/// Per-vertex load: summed over ordered pairs (s, t), the fraction of s-t
/// geodesics that pass through the vertex.
using LoadVector = std::vector<double>;

enum class Endpoints {
  Exclude,  // only vertices strictly inside a geodesic are credited
  Include,  // s and t are credited with a full unit for every reachable pair
};

/// Shortest-path counts and predecessor lists from a single BFS source.
struct PathCountTable {
  Vertex source = 0;
  std::vector<double> sigma;                 // number of geodesics source -> v
  std::vector<std::vector<Vertex>> preds;    // predecessors on those geodesics
  std::vector<Vertex> order;                 // vertices in non-decreasing distance
  std::vector<std::uint32_t> dist;

  PathCountTable(const Graph& g, Vertex s)
      : source(s), sigma(g.vertex_count(), 0.0), preds(g.vertex_count()),
        dist(g.vertex_count(), DistanceMatrix::unreachable) {
    order.reserve(g.vertex_count());
    order.push_back(s);
    sigma[s] = 1.0;
    dist[s] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const Vertex u = order[head];
      for (Vertex v : g.neighbors(u)) {
        if (dist[v] == DistanceMatrix::unreachable) {
          dist[v] = dist[u] + 1;
          order.push_back(v);
        }
        if (dist[v] == dist[u] + 1) {
          sigma[v] += sigma[u];
          preds[v].push_back(u);
        }
      }
    }
  }
};

/// Exact load by per-source BFS and reverse dependency accumulation, O(N*M).
inline LoadVector compute_load(const Graph& g, Endpoints endpoints = Endpoints::Exclude) {
  const std::size_t n = g.vertex_count();
  LoadVector load(n, 0.0);
  std::vector<double> delta(n);
  for (Vertex s = 0; s < n; ++s) {
    const PathCountTable paths(g, s);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = paths.order.rbegin(); it != paths.order.rend(); ++it) {
      const Vertex w = *it;
      for (Vertex p : paths.preds[w]) delta[p] += paths.sigma[p] / paths.sigma[w] * (1.0 + delta[w]);
      if (w != s) load[w] += delta[w];
    }
    if (endpoints == Endpoints::Include) {
      // Every reachable t != s credits s (as source) and t (as target) once.
      const double reached = static_cast<double>(paths.order.size() - 1);
      load[s] += reached;
      for (std::size_t i = 1; i < paths.order.size(); ++i) load[paths.order[i]] += 1.0;
    }
  }
  return load;
}

/// Reference load by explicit enumeration of every geodesic of every ordered
/// pair. Exponential in the worst case; restricted to small graphs.
inline LoadVector brute_force_load(const Graph& g, Endpoints endpoints = Endpoints::Exclude) {
  constexpr std::size_t max_vertices = 16;
  const std::size_t n = g.vertex_count();
  if (n > max_vertices)
    throw TooLarge("brute_force_load supports at most " + std::to_string(max_vertices) + " vertices");

  const DistanceMatrix d = all_pairs_hop_distances(g);
  LoadVector load(n, 0.0);
  std::vector<Vertex> path;
  std::vector<double> through(n);

  for (Vertex s = 0; s < n; ++s) {
    for (Vertex t = 0; t < n; ++t) {
      if (s == t || !d.reachable(s, t)) continue;
      std::fill(through.begin(), through.end(), 0.0);
      double total = 0.0;
      // Depth-first walk from s, stepping only to neighbours one hop closer to t.
      path.assign(1, s);
      auto walk = [&](auto&& self, Vertex u) -> void {
        if (u == t) {
          total += 1.0;
          for (Vertex v : path) through[v] += 1.0;
          return;
        }
        for (Vertex w : g.neighbors(u)) {
          if (d(w, t) + 1 != d(u, t)) continue;
          path.push_back(w);
          self(self, w);
          path.pop_back();
        }
      };
      walk(walk, s);
      for (Vertex v = 0; v < n; ++v) {
        if (endpoints == Endpoints::Exclude && (v == s || v == t)) continue;
        load[v] += through[v] / total;
      }
    }
  }
  return load;
}

struct LoadStats {
  double mean = 0.0;
  double std = 0.0;             // population standard deviation
  double normalized_std = 0.0;  // std / mean, 0 when every load is 0
  double max = 0.0;
  Vertex argmax = 0;
};

inline LoadStats load_stats(const LoadVector& lv) {
  if (lv.size() < 2) throw InvalidArgument("load_stats needs at least 2 vertices");
  LoadStats st;
  double sum = 0.0;
  for (std::size_t v = 0; v < lv.size(); ++v) {
    sum += lv[v];
    if (lv[v] > st.max) {
      st.max = lv[v];
      st.argmax = static_cast<Vertex>(v);
    }
  }
  const double n = static_cast<double>(lv.size());
  st.mean = sum / n;
  double sq = 0.0;
  for (double x : lv) sq += (x - st.mean) * (x - st.mean);
  st.std = std::sqrt(sq / n);
  st.normalized_std = st.mean > 0.0 ? st.std / st.mean : 0.0;
  return st;
}

/// `vertex,load` rows followed by a single `#` stats footer line.
inline void write_load_csv(std::ostream& os, const LoadVector& lv) {
  os << "vertex,load\n";
  for (std::size_t v = 0; v < lv.size(); ++v) os << v << ',' << format_double(lv[v]) << '\n';
  if (lv.size() >= 2) {
    const auto st = load_stats(lv);
    os << "# mean=" << format_double(st.mean) << ",std=" << format_double(st.std)
       << ",normalized_std=" << format_double(st.normalized_std) << ",max=" << format_double(st.max)
       << ",argmax=" << st.argmax << '\n';
  }
}

}  // namespace lrdnet
