#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lrdnet/erramilli.hpp"
#include "lrdnet/errors.hpp"
#include "lrdnet/format.hpp"
#include "lrdnet/graph.hpp"
#include "lrdnet/load.hpp"
#include "lrdnet/simulation.hpp"
#include "lrdnet/static_model.hpp"

namespace lrdnet {

/// Everything a figure sweep needs. Defaults reproduce the 500-vertex,
/// mean-degree-3, rho = 0.16 setting over the random / gamma=3 / gamma=2 grid.
struct ExperimentPlan {
  std::size_t n_vertices = 500;
  double avg_degree = 3.0;
  std::vector<double> alphas{0.0, 0.5, 1.0};
  std::vector<double> lambdas{0.005, 0.01, 0.02, 0.05, 0.1};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double rho = 0.16;
  double m1 = 2.0;
  double m2 = 2.0;
  std::size_t warmup = 1000;
  std::size_t steps = 10000;
  std::string out = "results";
  bool queue_series = false;
  std::uint64_t calibration_seed = 1;
  std::size_t calibration_orbits = 256;
  /// Calibration tolerance as a fraction of the target lambda.
  double calibration_rel_tol = 0.05;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (n_vertices < 2) throw ValidationError("n", "need at least 2 vertices");
    if (!(avg_degree > 0.0)) throw ValidationError("avg_degree", "must be positive");
    if (alphas.empty()) throw ValidationError("alphas", "need at least one value");
    for (double a : alphas)
      if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("alphas", "every alpha must lie in [0, 1]");
    for (double l : lambdas)
      if (!(l > 0.0 && l < 1.0)) throw ValidationError("lambdas", "every lambda must lie in (0, 1)");
    if (seeds.empty()) throw ValidationError("seeds", "need at least one seed");
    if (!(rho > 0.0 && rho <= 1.0)) throw ValidationError("rho", "must lie in (0, 1]");
    if (!(m1 >= 1.5 && m1 <= 2.0)) throw ValidationError("m1", "must lie in [1.5, 2]");
    if (!(m2 >= 1.5 && m2 <= 2.0)) throw ValidationError("m2", "must lie in [1.5, 2]");
    if (steps == 0) throw ValidationError("steps", "must be positive");
    if (calibration_orbits == 0) throw ValidationError("calibration_orbits", "must be positive");
    if (!(calibration_rel_tol > 0.0 && calibration_rel_tol < 1.0))
      throw ValidationError("calibration_rel_tol", "must lie in (0, 1)");
  }
};

namespace detail {

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline double to_real(std::string_view key, std::string_view v) {
  auto x = parse_double(v);
  if (!x) throw ValidationError(std::string(key), "not a number: '" + std::string(v) + "'");
  return *x;
}

inline std::uint64_t to_count(std::string_view key, std::string_view v) {
  auto x = parse_int<std::uint64_t>(v);
  if (!x) throw ValidationError(std::string(key), "not a non-negative integer: '" + std::string(v) + "'");
  return *x;
}

inline bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(std::string(key), "not a boolean: '" + std::string(v) + "'");
}

inline std::vector<double> to_reals(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(to_real(key, item));
  return out;
}

/// Comma-separated seeds; `a..b` expands to an inclusive range.
inline std::vector<std::uint64_t> to_seeds(std::string_view key, std::string_view v) {
  std::vector<std::uint64_t> out;
  for (auto item : split_list(v)) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(to_count(key, item));
      continue;
    }
    const auto lo = to_count(key, item.substr(0, dots));
    const auto hi = to_count(key, item.substr(dots + 2));
    if (hi < lo) throw ValidationError(std::string(key), "empty seed range");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

/// Returns false for an unknown key.
inline bool apply_setting(ExperimentPlan& plan, std::string_view key, std::string_view value) {
  if (key == "n") plan.n_vertices = to_count(key, value);
  else if (key == "avg_degree") plan.avg_degree = to_real(key, value);
  else if (key == "alphas") plan.alphas = to_reals(key, value);
  else if (key == "lambdas") plan.lambdas = to_reals(key, value);
  else if (key == "seeds") plan.seeds = to_seeds(key, value);
  else if (key == "rho") plan.rho = to_real(key, value);
  else if (key == "m1") plan.m1 = to_real(key, value);
  else if (key == "m2") plan.m2 = to_real(key, value);
  else if (key == "warmup") plan.warmup = to_count(key, value);
  else if (key == "steps") plan.steps = to_count(key, value);
  else if (key == "out") plan.out = std::string(trim(value));
  else if (key == "queue_series") plan.queue_series = to_bool(key, value);
  else if (key == "calibration_seed") plan.calibration_seed = to_count(key, value);
  else if (key == "calibration_orbits") plan.calibration_orbits = to_count(key, value);
  else if (key == "calibration_rel_tol") plan.calibration_rel_tol = to_real(key, value);
  else if (key == "threads") plan.threads = to_count(key, value);
  else return false;
  return true;
}

}  // namespace detail

/// Parses `key = value` lines (`#` starts a comment, lists are
/// comma-separated), then applies `overrides` (same keys) on top.
inline ExperimentPlan parse_plan(std::string_view config_text,
                                 const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  ExperimentPlan plan;
  std::size_t lineno = 0;
  while (!config_text.empty()) {
    ++lineno;
    const auto nl = config_text.find('\n');
    auto line = config_text.substr(0, nl);
    config_text.remove_prefix(nl == std::string_view::npos ? config_text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key", lineno);
    if (!detail::apply_setting(plan, key, value))
      throw ParseError("unknown key '" + std::string(key) + "'", lineno);
  }
  for (const auto& [key, value] : overrides)
    if (!detail::apply_setting(plan, key, value)) throw ValidationError(key, "unknown setting");
  plan.validate();
  return plan;
}

inline ExperimentPlan load_plan(const std::filesystem::path& path,
                                const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str(), overrides);
}

/// Header plus string cells; every numeric cell is written with format_double.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& os, const CsvTable& table) {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

/// Writes the table to `path`. An empty table is an error and creates no file.
inline void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) throw InvalidArgument("refusing to write '" + path.string() + "': no records");
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory for '" + path.string() + "': " + ec.message());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(os, table);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    for (auto cell : detail::split_list(line)) cells.emplace_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

inline std::string gamma_label(double alpha) {
  return alpha > 0.0 ? format_double(degree_exponent(alpha)) : "inf";
}

/// Structural and load summary of one (alpha, seed) topology.
struct TopologyRecord {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_giant = 0;
  std::size_t m_giant = 0;
  double cpl = 0.0;
  LoadStats load{};
};

inline TopologyRecord describe_topology(const Graph& giant, double alpha, std::uint64_t seed) {
  TopologyRecord r;
  r.alpha = alpha;
  r.seed = seed;
  r.n_giant = giant.vertex_count();
  r.m_giant = giant.edge_count();
  r.cpl = characteristic_path_length(all_pairs_hop_distances(giant));
  r.load = load_stats(compute_load(giant));
  return r;
}

/// One (alpha, lambda, seed) simulation row.
struct SweepRecord {
  TopologyRecord topology{};
  double lambda = 0.0;
  SimMetrics metrics{};
};

struct SweepFailure {
  double alpha = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::string message;
};

struct Fig12Result {
  std::vector<TopologyRecord> per_seed;
};

struct Fig34Result {
  std::vector<SweepRecord> per_seed;
  std::vector<SweepFailure> failures;
  std::map<double, double> threshold_by_lambda;
};

namespace detail {

/// Runs `count` independent jobs on up to `threads` workers. Results are
/// addressed by index, so completion order does not affect output.
inline void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return m;
}

}  // namespace detail

inline Graph plan_giant(const ExperimentPlan& plan, double alpha, std::uint64_t seed) {
  const auto params = GenParams::with_mean_degree(plan.n_vertices, plan.avg_degree, alpha, seed);
  return giant_component(generate_static_model(params)).graph;
}

/// Mean load and normalized load spread per (alpha, seed), on the giant component.
inline Fig12Result run_fig12_sweep(const ExperimentPlan& plan) {
  plan.validate();
  const std::size_t n_seeds = plan.seeds.size();
  Fig12Result out;
  out.per_seed.resize(plan.alphas.size() * n_seeds);
  detail::parallel_for(out.per_seed.size(), plan.threads, [&](std::size_t i) {
    const double alpha = plan.alphas[i / n_seeds];
    const auto seed = plan.seeds[i % n_seeds];
    out.per_seed[i] = describe_topology(plan_giant(plan, alpha, seed), alpha, seed);
  });
  return out;
}

/// Calibration settings matching the plan's simulation horizon.
inline CalibrationOptions plan_calibration(const ExperimentPlan& plan, double lambda) {
  CalibrationOptions opt;
  opt.tol = plan.calibration_rel_tol * lambda;
  opt.rate.burn_in = ErramilliSource::default_burn_in + plan.warmup;
  opt.rate.samples = plan.steps;
  opt.rate.orbits = plan.calibration_orbits;
  return opt;
}

/// Throughput and delivery time per (alpha, lambda, seed). The Off/On
/// threshold is calibrated once per lambda and shared by all topologies.
/// Failed cells are recorded and skipped.
inline Fig34Result run_fig34_sweep(const ExperimentPlan& plan,
                                   const std::filesystem::path& queue_series_dir = {}) {
  plan.validate();
  if (plan.lambdas.empty()) throw ValidationError("lambdas", "need at least one value");
  Fig34Result out;
  std::mutex failures_mutex;

  std::vector<std::optional<double>> thresholds(plan.lambdas.size());
  detail::parallel_for(plan.lambdas.size(), plan.threads, [&](std::size_t i) {
    const double lambda = plan.lambdas[i];
    try {
      thresholds[i] = calibrate_d(plan.m1, plan.m2, lambda, plan.calibration_seed, plan_calibration(plan, lambda));
    } catch (const Error& e) {
      std::lock_guard lock(failures_mutex);
      for (double a : plan.alphas)
        for (auto s : plan.seeds) out.failures.push_back({a, lambda, s, std::string("calibration: ") + e.what()});
    }
  });
  for (std::size_t i = 0; i < plan.lambdas.size(); ++i)
    if (thresholds[i]) out.threshold_by_lambda[plan.lambdas[i]] = *thresholds[i];

  const std::size_t n_seeds = plan.seeds.size();
  const std::size_t n_lambdas = plan.lambdas.size();
  std::vector<std::optional<Graph>> giants(plan.alphas.size() * n_seeds);
  std::vector<TopologyRecord> topo(giants.size());
  std::vector<std::string> topo_error(giants.size());
  detail::parallel_for(giants.size(), plan.threads, [&](std::size_t i) {
    const double alpha = plan.alphas[i / n_seeds];
    const auto seed = plan.seeds[i % n_seeds];
    try {
      giants[i] = plan_giant(plan, alpha, seed);
      topo[i] = describe_topology(*giants[i], alpha, seed);
    } catch (const Error& e) {
      giants[i].reset();
      topo_error[i] = e.what();
    }
  });

  // Cell order: alpha-major, then lambda, then seed.
  const std::size_t n_cells = plan.alphas.size() * n_lambdas * n_seeds;
  std::vector<std::optional<SweepRecord>> cells(n_cells);
  std::vector<std::string> cell_error(n_cells);
  detail::parallel_for(n_cells, plan.threads, [&](std::size_t c) {
    const std::size_t ai = c / (n_lambdas * n_seeds);
    const std::size_t li = (c / n_seeds) % n_lambdas;
    const std::size_t si = c % n_seeds;
    const std::size_t ti = ai * n_seeds + si;
    if (!thresholds[li]) return;  // already recorded as a calibration failure
    if (!giants[ti]) {
      cell_error[c] = "topology: " + topo_error[ti];
      return;
    }
    try {
      SimConfig cfg;
      cfg.graph = *giants[ti];
      cfg.host_density = plan.rho;
      cfg.traffic = {plan.m1, plan.m2, *thresholds[li]};
      cfg.warmup_steps = plan.warmup;
      cfg.measure_steps = plan.steps;
      cfg.seed = plan.seeds[si];
      cfg.record_queue_series = plan.queue_series && !queue_series_dir.empty();
      SweepRecord rec{topo[ti], plan.lambdas[li], run(std::move(cfg))};
      if (!rec.metrics.queue_length_timeseries.empty()) {
        const auto name = "queue_a" + format_double(plan.alphas[ai]) + "_l" + format_double(plan.lambdas[li]) +
                          "_s" + std::to_string(plan.seeds[si]) + ".csv";
        std::filesystem::create_directories(queue_series_dir);
        std::ofstream os(queue_series_dir / name);
        write_queue_series_csv(os, rec.metrics.queue_length_timeseries);
        rec.metrics.queue_length_timeseries.clear();
      }
      cells[c] = std::move(rec);
    } catch (const std::exception& e) {
      cell_error[c] = e.what();
    }
  });

  for (std::size_t c = 0; c < n_cells; ++c) {
    if (cells[c]) {
      out.per_seed.push_back(std::move(*cells[c]));
    } else if (!cell_error[c].empty()) {
      out.failures.push_back({plan.alphas[c / (n_lambdas * n_seeds)], plan.lambdas[(c / n_seeds) % n_lambdas],
                              plan.seeds[c % n_seeds], cell_error[c]});
    }
  }
  return out;
}

inline CsvTable fig12_table(const Fig12Result& r) {
  CsvTable t;
  t.header = {"alpha", "gamma", "seed", "n_giant", "m_giant", "cpl", "load_mean", "load_std", "load_nstd", "load_max"};
  for (const auto& x : r.per_seed)
    t.rows.push_back({format_double(x.alpha), gamma_label(x.alpha), std::to_string(x.seed),
                      std::to_string(x.n_giant), std::to_string(x.m_giant), format_double(x.cpl),
                      format_double(x.load.mean), format_double(x.load.std), format_double(x.load.normalized_std),
                      format_double(x.load.max)});
  return t;
}

/// Seed-averaged rows: mean and sample standard deviation per column.
inline CsvTable fig12_mean_table(const Fig12Result& r) {
  CsvTable t;
  t.header = {"alpha", "gamma", "n_seeds", "n_giant", "n_giant_sd", "cpl", "cpl_sd",
              "load_mean", "load_mean_sd", "load_nstd", "load_nstd_sd"};
  std::vector<double> order;
  for (const auto& x : r.per_seed)
    if (std::find(order.begin(), order.end(), x.alpha) == order.end()) order.push_back(x.alpha);
  for (double a : order) {
    std::vector<double> ng, cpl, lm, ln;
    for (const auto& x : r.per_seed) {
      if (x.alpha != a) continue;
      ng.push_back(static_cast<double>(x.n_giant));
      cpl.push_back(x.cpl);
      lm.push_back(x.load.mean);
      ln.push_back(x.load.normalized_std);
    }
    std::vector<std::string> row{format_double(a), gamma_label(a), std::to_string(ng.size())};
    for (const auto* col : {&ng, &cpl, &lm, &ln}) {
      const auto m = detail::moments(*col);
      row.push_back(format_double(m.mean));
      row.push_back(format_double(m.sd));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable fig34_table(const Fig34Result& r) {
  CsvTable t;
  t.header = {"alpha", "gamma", "lambda", "seed", "n_giant", "cpl", "load_mean", "load_nstd",
              "generated", "delivered", "mean_delivery_time", "in_flight", "max_queue"};
  for (const auto& x : r.per_seed) {
    const auto& m = x.metrics;
    t.rows.push_back({format_double(x.topology.alpha), gamma_label(x.topology.alpha), format_double(x.lambda),
                      std::to_string(x.topology.seed), std::to_string(x.topology.n_giant),
                      format_double(x.topology.cpl), format_double(x.topology.load.mean),
                      format_double(x.topology.load.normalized_std), std::to_string(m.generated),
                      std::to_string(m.delivered), format_double(m.mean_delivery_time),
                      std::to_string(m.in_flight_at_end), std::to_string(m.max_queue)});
  }
  return t;
}

/// Seed-averaged value of one metric for an (alpha, lambda) cell.
inline detail::Moments fig34_cell(const Fig34Result& r, double alpha, double lambda,
                                  const std::function<double(const SweepRecord&)>& metric) {
  std::vector<double> xs;
  for (const auto& x : r.per_seed)
    if (x.topology.alpha == alpha && x.lambda == lambda) xs.push_back(metric(x));
  return detail::moments(xs);
}

inline CsvTable fig34_mean_table(const Fig34Result& r) {
  CsvTable t;
  t.header = {"alpha", "gamma", "lambda", "n_seeds"};
  const std::vector<std::pair<std::string, std::function<double(const SweepRecord&)>>> metrics{
      {"n_giant", [](const SweepRecord& x) { return static_cast<double>(x.topology.n_giant); }},
      {"cpl", [](const SweepRecord& x) { return x.topology.cpl; }},
      {"load_mean", [](const SweepRecord& x) { return x.topology.load.mean; }},
      {"load_nstd", [](const SweepRecord& x) { return x.topology.load.normalized_std; }},
      {"generated", [](const SweepRecord& x) { return static_cast<double>(x.metrics.generated); }},
      {"delivered", [](const SweepRecord& x) { return static_cast<double>(x.metrics.delivered); }},
      {"mean_delivery_time", [](const SweepRecord& x) { return x.metrics.mean_delivery_time; }},
      {"in_flight", [](const SweepRecord& x) { return static_cast<double>(x.metrics.in_flight_at_end); }},
      {"max_queue", [](const SweepRecord& x) { return static_cast<double>(x.metrics.max_queue); }},
  };
  for (const auto& [name, _] : metrics) {
    t.header.push_back(name);
    t.header.push_back(name + "_sd");
  }
  std::vector<std::pair<double, double>> cells;
  for (const auto& x : r.per_seed) {
    const std::pair key{x.topology.alpha, x.lambda};
    if (std::find(cells.begin(), cells.end(), key) == cells.end()) cells.push_back(key);
  }
  for (auto [a, l] : cells) {
    std::size_t n = 0;
    for (const auto& x : r.per_seed) n += (x.topology.alpha == a && x.lambda == l);
    std::vector<std::string> row{format_double(a), gamma_label(a), format_double(l), std::to_string(n)};
    for (const auto& [_, fn] : metrics) {
      const auto m = fig34_cell(r, a, l, fn);
      row.push_back(format_double(m.mean));
      row.push_back(format_double(m.sd));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable failures_table(const std::vector<SweepFailure>& failures) {
  CsvTable t;
  t.header = {"alpha", "lambda", "seed", "error"};
  for (const auto& f : failures) {
    std::string msg = f.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    t.rows.push_back({format_double(f.alpha), format_double(f.lambda), std::to_string(f.seed), msg});
  }
  return t;
}

}  // namespace lrdnet
