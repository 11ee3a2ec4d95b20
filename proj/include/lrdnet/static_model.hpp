#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "lrdnet/errors.hpp"
#include "lrdnet/format.hpp"
#include "lrdnet/graph.hpp"
#include "lrdnet/random.hpp"

namespace lrdnet {

/// Parameters of the fitness-based static model. alpha = 0 is Erdos-Renyi G(N, M).
struct GenParams {
  std::size_t n_vertices = 500;
  std::size_t n_edges = 750;
  double alpha = 0.0;
  std::uint64_t seed = 1;
  /// Generation aborts after this many consecutive failed placements per
  /// requested edge (duplicate or self-pair draws).
  std::size_t attempts_per_edge = 200;

  /// M = floor(avg_degree * N / 2).
  static GenParams with_mean_degree(std::size_t n, double avg_degree, double alpha, std::uint64_t seed) {
    GenParams p;
    p.n_vertices = n;
    p.n_edges = static_cast<std::size_t>(std::floor(avg_degree * static_cast<double>(n) / 2.0));
    p.alpha = alpha;
    p.seed = seed;
    return p;
  }

  double mean_degree() const { return 2.0 * static_cast<double>(n_edges) / static_cast<double>(n_vertices); }

  void validate() const {
    if (n_vertices < 2) throw ValidationError("n_vertices", "need at least 2 vertices");
    if (n_edges == 0) throw ValidationError("n_edges", "must be positive");
    if (n_edges > n_vertices * (n_vertices - 1) / 2)
      throw ValidationError("n_edges", "exceeds N(N-1)/2");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha", "must lie in [0, 1]");
  }
};

/// Degree exponent gamma = 1 + 1/alpha; infinite for alpha = 0.
inline double degree_exponent(double alpha) {
  return alpha > 0.0 ? 1.0 + 1.0 / alpha : HUGE_VAL;
}

/// Inverse-CDF sampler over the static fitness weights p_i = i^-alpha, i = 1..N.
class FitnessSampler {
public:
  FitnessSampler(std::size_t n, double alpha) : cdf_(n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += std::pow(static_cast<double>(i + 1), -alpha);
      cdf_[i] = acc;
    }
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  Vertex draw(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<Vertex>(it - cdf_.begin());
  }

  /// Normalized selection probability of (0-based) vertex v.
  double probability(Vertex v) const { return v == 0 ? cdf_[0] : cdf_[v] - cdf_[v - 1]; }

private:
  std::vector<double> cdf_;
};

inline Graph generate_static_model(const GenParams& params) {
  params.validate();
  const FitnessSampler sampler(params.n_vertices, params.alpha);
  Rng rng(derive_seed(params.seed, 0x57a71c));

  std::set<Edge> placed;
  std::vector<Edge> edges;
  edges.reserve(params.n_edges);
  const std::size_t budget = params.attempts_per_edge * params.n_edges;
  std::size_t failures = 0;
  while (edges.size() < params.n_edges) {
    Vertex a = sampler.draw(rng);
    Vertex b = sampler.draw(rng);
    if (a > b) std::swap(a, b);
    if (a == b || !placed.emplace(a, b).second) {
      if (++failures >= budget)
        throw AttemptBudgetExceeded("placed " + std::to_string(edges.size()) + " of " +
                                    std::to_string(params.n_edges) + " edges before " +
                                    std::to_string(budget) + " consecutive failed draws");
      continue;
    }
    failures = 0;
    edges.emplace_back(a, b);
  }
  return Graph::from_edges(params.n_vertices, edges);
}

/// Maximum-likelihood exponent of a discrete power-law tail, using the
/// continuous approximation with the half-integer offset:
///   gamma = 1 + n / sum_i ln(k_i / (k_min - 1/2))   over degrees k_i >= k_min.
inline double fit_powerlaw_exponent(const DegreeHistogram& hist, std::size_t k_min) {
  if (k_min < 1) throw InsufficientTail("k_min must be at least 1");
  std::size_t distinct = 0;
  double n = 0.0;
  double log_sum = 0.0;
  const double offset = static_cast<double>(k_min) - 0.5;
  for (auto [k, count] : hist) {
    if (k < k_min || count == 0) continue;
    ++distinct;
    n += static_cast<double>(count);
    log_sum += static_cast<double>(count) * std::log(static_cast<double>(k) / offset);
  }
  if (distinct < 10)
    throw InsufficientTail("tail above k_min has " + std::to_string(distinct) +
                           " distinct degrees, need 10");
  return 1.0 + n / log_sum;
}

/// Header metadata carried by the edge-list text format.
struct EdgeListMeta {
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
};

inline void write_edge_list(std::ostream& os, const Graph& g, const EdgeListMeta& meta = {}) {
  os << "# N=" << g.vertex_count() << '\n';
  os << "# M=" << g.edge_count() << '\n';
  if (meta.alpha) os << "# alpha=" << format_double(*meta.alpha) << '\n';
  if (meta.seed) os << "# seed=" << *meta.seed << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

struct EdgeListFile {
  Graph graph;
  EdgeListMeta meta;
};

/// Reads the format produced by write_edge_list. If the header lacks N, the
/// vertex count is one past the largest index seen.
inline EdgeListFile read_edge_list(std::istream& is) {
  std::optional<std::size_t> n_header;
  std::optional<std::size_t> m_header;
  EdgeListFile out;
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      body = trim(body.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = trim(body.substr(0, eq));
      const auto value = trim(body.substr(eq + 1));
      if (key == "N") n_header = parse_int<std::size_t>(value);
      else if (key == "M") m_header = parse_int<std::size_t>(value);
      else if (key == "alpha") out.meta.alpha = parse_double(value);
      else if (key == "seed") out.meta.seed = parse_int<std::uint64_t>(value);
      continue;
    }
    const auto sp = body.find_first_of(" \t");
    if (sp == std::string_view::npos) throw ParseError("expected 'u v'", lineno);
    auto u = parse_int<Vertex>(body.substr(0, sp));
    auto v = parse_int<Vertex>(body.substr(sp + 1));
    if (!u || !v) throw ParseError("bad vertex index", lineno);
    edges.emplace_back(*u, *v);
    max_index = std::max<std::size_t>(max_index, std::max(*u, *v));
  }
  const std::size_t n = n_header ? *n_header : (edges.empty() ? 0 : max_index + 1);
  if (m_header && *m_header != edges.size())
    throw ParseError("header M=" + std::to_string(*m_header) + " but " +
                         std::to_string(edges.size()) + " edges listed",
                     lineno);
  out.graph = Graph::from_edges(n, edges);
  return out;
}

}  // namespace lrdnet
