#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "lrdnet/erramilli.hpp"
#include "lrdnet/errors.hpp"
#include "lrdnet/format.hpp"
#include "lrdnet/graph.hpp"
#include "lrdnet/random.hpp"

namespace lrdnet {

using PacketId = std::uint64_t;

struct Packet {
  PacketId id = 0;
  Vertex src = 0;
  Vertex dst = 0;
  std::uint64_t created_at = 0;
  std::optional<std::uint64_t> delivered_at;
};

/// Uniformly random host set of size round(rho * N), sorted ascending.
inline std::vector<Vertex> assign_hosts(const Graph& g, double rho, std::uint64_t seed) {
  if (!(rho > 0.0 && rho <= 1.0)) throw ValidationError("rho", "host density must lie in (0, 1]");
  const std::size_t n = g.vertex_count();
  const auto count = static_cast<std::size_t>(std::llround(rho * static_cast<double>(n)));
  if (count < 2) throw TooFewHosts("host density " + format_double(rho) + " yields fewer than 2 hosts");

  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  Rng rng(derive_seed(seed, 0x4057));
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + rng.below(n - i);
    std::swap(perm[i], perm[j]);
  }
  perm.resize(count);
  std::sort(perm.begin(), perm.end());
  return perm;
}

/// Next hop for a packet at `node` bound for `dst`:
///   (a) neighbours at minimum distance to dst;
///   (b) among those, the link with the fewest packets forwarded so far;
///   (c) uniform random choice among any remaining tie.
/// `link_counts` is parallel to g.neighbors(node).
inline Vertex select_next_hop(const Graph& g, Vertex node, Vertex dst, const DistanceMatrix& dist,
                              std::span<const std::uint64_t> link_counts, Rng& rng) {
  const auto nbrs = g.neighbors(node);
  if (nbrs.empty()) throw InvalidArgument("vertex " + std::to_string(node) + " has no neighbours");
  auto best_dist = DistanceMatrix::unreachable;
  std::uint64_t best_count = 0;
  // Small fixed buffer would do for most graphs, but hubs can have hundreds of ties.
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const auto dd = dist(nbrs[i], dst);
    if (dd == DistanceMatrix::unreachable) continue;
    if (dd < best_dist || (dd == best_dist && link_counts[i] < best_count)) {
      best_dist = dd;
      best_count = link_counts[i];
      ties.assign(1, i);
    } else if (dd == best_dist && link_counts[i] == best_count) {
      ties.push_back(i);
    }
  }
  if (ties.empty()) throw InvalidArgument("destination unreachable from vertex " + std::to_string(node));
  const auto pick = ties.size() == 1 ? ties[0] : ties[rng.below(ties.size())];
  return nbrs[pick];
}

struct SimConfig {
  Graph graph;
  double host_density = 0.16;
  ErramilliParams traffic{};
  std::size_t warmup_steps = 1000;
  std::size_t measure_steps = 10000;
  std::uint64_t seed = 1;
  bool record_queue_series = false;
  /// When false, hosts never generate; packets enter only through inject().
  bool generate_traffic = true;
  /// Burn-in applied to every host's source before the first step.
  std::size_t source_burn_in = ErramilliSource::default_burn_in;
};

struct SimMetrics {
  /// Packets already queued when the measurement window opened.
  std::uint64_t carried_in = 0;
  /// Packets created inside the measurement window.
  std::uint64_t generated = 0;
  /// Packets delivered inside the measurement window (throughput).
  std::uint64_t delivered = 0;
  /// Mean delivery time in steps over packets delivered inside the window.
  double mean_delivery_time = 0.0;
  std::uint64_t in_flight_at_end = 0;
  /// Largest single-node queue seen during the window.
  std::uint64_t max_queue = 0;
  /// Total queued packets after each window step, when recorded.
  std::vector<std::uint64_t> queue_length_timeseries;

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

/// Observer for packet movements, used for tracing and invariant checks.
struct SimEvent {
  enum class Kind { Created, Forwarded, Delivered } kind;
  std::uint64_t time;  // time at which the event completes
  PacketId packet;
  Vertex from;
  Vertex to;
};

/// Discrete-time store-and-forward network. Every step, hosts first generate
/// packets into their own queues, then every node with a non-empty queue
/// forwards its head packet one hop. Packets moved in a step land at the tail
/// of the receiving queue and cannot move again in the same step.
class Simulator {
public:
  explicit Simulator(SimConfig config)
      : config_(std::move(config)),
        dist_(all_pairs_hop_distances(config_.graph)),
        route_rng_(derive_seed(config_.seed, 2)),
        dest_rng_(derive_seed(config_.seed, 3)) {
    const auto& g = config_.graph;
    if (!is_connected(g)) throw InvalidArgument("simulation graph must be connected");
    config_.traffic.validate();
    hosts_ = assign_hosts(g, config_.host_density, config_.seed);
    is_host_.assign(g.vertex_count(), false);
    sources_.reserve(hosts_.size());
    for (Vertex h : hosts_) {
      is_host_[h] = true;
      sources_.emplace_back(config_.traffic, derive_seed(config_.seed, 0x1000 + h), config_.source_burn_in);
    }
    queues_.resize(g.vertex_count());
    link_counts_.resize(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) link_counts_[v].assign(g.degree(v), 0);
    relayed_.assign(g.vertex_count(), 0);
  }

  void set_observer(std::function<void(const SimEvent&)> obs) { observer_ = std::move(obs); }

  /// Advances one time step (generation, then forwarding).
  void step() {
    // Phase 1: generation.
    for (std::size_t k = 0; k < hosts_.size() && config_.generate_traffic; ++k) {
      if (!sources_[k].next_bit()) continue;
      const Vertex src = hosts_[k];
      auto j = dest_rng_.below(hosts_.size() - 1);
      if (j >= k) ++j;
      Packet p{packets_.size(), src, hosts_[j], clock_, std::nullopt};
      packets_.push_back(p);
      queues_[src].push_back(p.id);
      ++total_generated_;
      if (observer_) observer_({SimEvent::Kind::Created, clock_, p.id, src, src});
    }

    // Phase 2: forwarding from the queue state at the start of the phase.
    moves_.clear();
    const auto& g = config_.graph;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      auto& q = queues_[v];
      if (q.empty()) continue;
      const PacketId id = q.front();
      q.pop_front();
      const Packet& p = packets_[id];
      const Vertex next = select_next_hop(g, v, p.dst, dist_, link_counts_[v], route_rng_);
      const auto nbrs = g.neighbors(v);
      const auto slot = static_cast<std::size_t>(std::lower_bound(nbrs.begin(), nbrs.end(), next) - nbrs.begin());
      ++link_counts_[v][slot];
      if (p.src != v) ++relayed_[v];
      moves_.emplace_back(id, next);
    }
    const std::uint64_t arrival = clock_ + 1;
    for (auto [id, next] : moves_) {
      Packet& p = packets_[id];
      if (next == p.dst) {
        p.delivered_at = arrival;
        ++total_delivered_;
        if (arrival - p.created_at < dist_(p.src, p.dst))
          throw std::logic_error("packet delivered faster than its hop distance");
        if (observer_) observer_({SimEvent::Kind::Delivered, arrival, id, p.src, next});
        if (measuring_) {
          ++window_.delivered;
          delivery_time_sum_ += static_cast<double>(arrival - p.created_at);
        }
      } else {
        queues_[next].push_back(id);
        if (observer_) observer_({SimEvent::Kind::Forwarded, arrival, id, p.src, next});
      }
    }
    ++clock_;

    std::uint64_t queued = 0;
    std::uint64_t longest = 0;
    for (const auto& q : queues_) {
      queued += q.size();
      longest = std::max<std::uint64_t>(longest, q.size());
    }
    if (total_generated_ != total_delivered_ + queued)
      throw std::logic_error("packet conservation violated");
    if (measuring_) {
      window_.max_queue = std::max(window_.max_queue, longest);
      if (config_.record_queue_series) window_.queue_length_timeseries.push_back(queued);
    }
  }

  /// Runs warm-up then the measurement window and returns window metrics.
  SimMetrics run() {
    for (std::size_t i = 0; i < config_.warmup_steps; ++i) step();
    begin_measurement();
    for (std::size_t i = 0; i < config_.measure_steps; ++i) step();
    return end_measurement();
  }

  void begin_measurement() {
    window_ = SimMetrics{};
    window_.carried_in = in_flight();
    generated_at_open_ = total_generated_;
    delivery_time_sum_ = 0.0;
    measuring_ = true;
  }

  SimMetrics end_measurement() {
    measuring_ = false;
    window_.generated = total_generated_ - generated_at_open_;
    window_.in_flight_at_end = in_flight();
    window_.mean_delivery_time =
        window_.delivered > 0 ? delivery_time_sum_ / static_cast<double>(window_.delivered) : 0.0;
    return window_;
  }

  /// Per-vertex count of packets forwarded on behalf of other sources
  /// (packets passing through the vertex), cumulative over the whole run.
  const std::vector<std::uint64_t>& measure_load_proxy() const noexcept { return relayed_; }

  std::uint64_t in_flight() const noexcept { return total_generated_ - total_delivered_; }
  std::uint64_t total_generated() const noexcept { return total_generated_; }
  std::uint64_t total_delivered() const noexcept { return total_delivered_; }
  std::uint64_t clock() const noexcept { return clock_; }

  const std::vector<Vertex>& hosts() const noexcept { return hosts_; }
  const std::vector<Packet>& packets() const noexcept { return packets_; }
  const std::deque<PacketId>& queue(Vertex v) const { return queues_[v]; }
  std::span<const std::uint64_t> link_counts(Vertex v) const { return link_counts_[v]; }
  const DistanceMatrix& distances() const noexcept { return dist_; }
  const SimConfig& config() const noexcept { return config_; }

  /// Enqueues a packet directly at its source, bypassing the traffic sources.
  PacketId inject(Vertex src, Vertex dst) {
    if (src == dst) throw InvalidArgument("packet source equals destination");
    Packet p{packets_.size(), src, dst, clock_, std::nullopt};
    packets_.push_back(p);
    queues_[src].push_back(p.id);
    ++total_generated_;
    if (observer_) observer_({SimEvent::Kind::Created, clock_, p.id, src, src});
    return p.id;
  }

private:
  SimConfig config_;
  DistanceMatrix dist_;
  Rng route_rng_;
  Rng dest_rng_;
  std::vector<Vertex> hosts_;
  std::vector<bool> is_host_;
  std::vector<ErramilliSource> sources_;
  std::vector<std::deque<PacketId>> queues_;
  std::vector<std::vector<std::uint64_t>> link_counts_;
  std::vector<std::uint64_t> relayed_;
  std::vector<Packet> packets_;
  std::vector<std::pair<PacketId, Vertex>> moves_;
  std::function<void(const SimEvent&)> observer_;

  std::uint64_t clock_ = 0;
  std::uint64_t total_generated_ = 0;
  std::uint64_t total_delivered_ = 0;

  bool measuring_ = false;
  SimMetrics window_{};
  std::uint64_t generated_at_open_ = 0;
  double delivery_time_sum_ = 0.0;
};

inline SimMetrics run(SimConfig config) {
  Simulator sim(std::move(config));
  return sim.run();
}

/// Writes `step,total_queued` rows.
inline void write_queue_series_csv(std::ostream& os, std::span<const std::uint64_t> series) {
  os << "step,total_queued\n";
  for (std::size_t i = 0; i < series.size(); ++i) os << i << ',' << series[i] << '\n';
}

}  // namespace lrdnet
