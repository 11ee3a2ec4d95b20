// lrdnet command-line front end: graph generation, load analysis, traffic
// traces, single simulations and figure sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lrdnet/lrdnet.hpp"

namespace {

using namespace lrdnet;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_runtime = 2;

/// Output stream bound to a path, or stdout for "" / "-".
class Output {
public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

EdgeListFile read_edges(const std::string& path) {
  if (path.empty() || path == "-") return read_edge_list(std::cin);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_edge_list(in);
}

struct GenOptions {
  std::size_t n = 500;
  double avg_degree = 3.0;
  std::optional<std::size_t> edges;
  double alpha = 0.0;
  std::uint64_t seed = 1;
  bool giant = false;
  std::string out;
};

GenParams gen_params(const GenOptions& o) {
  auto p = GenParams::with_mean_degree(o.n, o.avg_degree, o.alpha, o.seed);
  if (o.edges) p.n_edges = *o.edges;
  return p;
}

int cmd_gen(const GenOptions& o) {
  Graph g = generate_static_model(gen_params(o));
  if (o.giant) g = giant_component(g).graph;
  Output out(o.out);
  write_edge_list(out.stream(), g, {o.alpha, o.seed});
  return exit_ok;
}

struct LoadOptions {
  std::string in;
  std::string out;
  bool include_endpoints = false;
  bool giant = false;
};

int cmd_load(const LoadOptions& o) {
  Graph g = read_edges(o.in).graph;
  if (o.giant) g = giant_component(g).graph;
  const auto lv = compute_load(g, o.include_endpoints ? Endpoints::Include : Endpoints::Exclude);
  Output out(o.out);
  write_load_csv(out.stream(), lv);
  return exit_ok;
}

struct TrafficOptions {
  double m1 = 2.0;
  double m2 = 2.0;
  std::optional<double> d;
  std::optional<double> lambda;
  double tol = 0.005;
  std::size_t samples = 100'000;
  std::size_t length = 100'000;
  std::uint64_t seed = 1;
  std::string format = "rle";
  std::string out;
  bool hurst = false;
};

int cmd_traffic(const TrafficOptions& o) {
  if (o.lambda) {
    CalibrationOptions opt;
    opt.tol = o.tol;
    opt.rate.samples = o.samples;
    const double d = calibrate_d(o.m1, o.m2, *o.lambda, o.seed, opt);
    const double achieved = estimate_rate({o.m1, o.m2, d}, o.seed, opt.rate);
    std::cout << "d=" << format_double(d) << "\nrate=" << format_double(achieved) << '\n';
    return exit_ok;
  }
  const ErramilliParams p{o.m1, o.m2, o.d.value_or(0.5)};
  p.validate();
  const auto bits = generate_bits(p, o.length, o.seed);
  if (o.hurst) {
    const std::vector<std::size_t> blocks{100, 300, 1000, 3000, 10000};
    std::cerr << "H=" << format_double(hurst_aggregated_variance(bits, blocks)) << '\n';
  }
  if (!o.hurst || !o.out.empty()) {
    Output out(o.out);
    if (o.format == "raw")
      write_bits_raw(out.stream(), bits);
    else
      write_bits_rle(out.stream(), bits);
  }
  return exit_ok;
}

struct RunOptions {
  std::string in;
  GenOptions gen;
  std::optional<double> lambda;
  std::optional<double> d;
  double rho = 0.16;
  double m1 = 2.0;
  double m2 = 2.0;
  std::size_t warmup = 1000;
  std::size_t steps = 10000;
  std::string out;
  std::string queue_series;
};

int cmd_run(const RunOptions& o) {
  Graph g;
  std::optional<double> alpha;
  if (!o.in.empty()) {
    auto file = read_edges(o.in);
    g = std::move(file.graph);
    alpha = file.meta.alpha;
  } else {
    g = generate_static_model(gen_params(o.gen));
    alpha = o.gen.alpha;
  }
  g = giant_component(g).graph;

  SimConfig cfg;
  cfg.graph = std::move(g);
  cfg.host_density = o.rho;
  cfg.warmup_steps = o.warmup;
  cfg.measure_steps = o.steps;
  cfg.seed = o.gen.seed;
  cfg.record_queue_series = !o.queue_series.empty();
  double d = o.d.value_or(0.5);
  if (o.lambda) {
    ExperimentPlan plan;
    plan.warmup = o.warmup;
    plan.steps = o.steps;
    d = calibrate_d(o.m1, o.m2, *o.lambda, 1, plan_calibration(plan, *o.lambda));
  }
  cfg.traffic = {o.m1, o.m2, d};

  Simulator sim(std::move(cfg));
  const auto m = sim.run();
  const double rate = static_cast<double>(m.generated) /
                      (static_cast<double>(sim.hosts().size()) * static_cast<double>(o.steps));

  CsvTable t;
  t.header = {"alpha", "gamma", "lambda", "seed", "generated", "delivered", "mean_delivery_time", "in_flight",
              "max_queue"};
  t.rows.push_back({alpha ? format_double(*alpha) : "nan", alpha ? gamma_label(*alpha) : "nan",
                    format_double(o.lambda.value_or(rate)), std::to_string(o.gen.seed), std::to_string(m.generated),
                    std::to_string(m.delivered), format_double(m.mean_delivery_time),
                    std::to_string(m.in_flight_at_end), std::to_string(m.max_queue)});
  Output out(o.out);
  write_csv(out.stream(), t);
  if (!o.queue_series.empty()) {
    std::ofstream qs(o.queue_series);
    if (!qs) throw IoError("cannot open '" + o.queue_series + "' for writing");
    write_queue_series_csv(qs, m.queue_length_timeseries);
  }
  return exit_ok;
}

struct SweepOptions {
  std::string config;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string only = "all";
};

int cmd_sweep(const SweepOptions& o) {
  const auto plan = o.config.empty() ? parse_plan("", o.overrides) : load_plan(o.config, o.overrides);
  const std::filesystem::path dir = plan.out;
  if (o.only == "all" || o.only == "fig12") {
    const auto r = run_fig12_sweep(plan);
    emit_csv(fig12_table(r), dir / "fig12_per_seed.csv");
    emit_csv(fig12_mean_table(r), dir / "fig12_mean.csv");
    std::cerr << "fig12: " << r.per_seed.size() << " topologies\n";
  }
  if (o.only == "all" || o.only == "fig34") {
    const auto r = run_fig34_sweep(plan, dir / "queue_series");
    if (!r.failures.empty()) emit_csv(failures_table(r.failures), dir / "fig34_failures.csv");
    if (r.per_seed.empty()) throw Error("every simulation cell failed");
    emit_csv(fig34_table(r), dir / "fig34_per_seed.csv");
    emit_csv(fig34_mean_table(r), dir / "fig34_mean.csv");
    std::cerr << "fig34: " << r.per_seed.size() << " runs, " << r.failures.size() << " failures\n";
  }
  return exit_ok;
}

void add_gen_flags(CLI::App* cmd, GenOptions& g) {
  cmd->add_option("--n", g.n, "Number of vertices")->capture_default_str();
  cmd->add_option("--avg-degree", g.avg_degree, "Mean degree <k>; M = floor(<k> N / 2)")->capture_default_str();
  cmd->add_option("--edges", g.edges, "Edge count M (overrides --avg-degree)");
  cmd->add_option("--alpha", g.alpha, "Fitness exponent in [0, 1]; 0 is Erdos-Renyi")->capture_default_str();
  cmd->add_option("--seed", g.seed, "Random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-to-scale-free network generation, load analysis and LRD packet simulation"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a static-model graph as an edge list");
  add_gen_flags(gen_cmd, gen);
  gen_cmd->add_flag("--giant", gen.giant, "Keep only the largest connected component");
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");

  LoadOptions load;
  auto* load_cmd = app.add_subcommand("load", "Per-vertex shortest-path load of an edge list");
  load_cmd->add_option("--in", load.in, "Edge list path (default stdin)");
  load_cmd->add_option("--out", load.out, "CSV output path (default stdout)");
  load_cmd->add_flag("--include-endpoints", load.include_endpoints, "Credit path endpoints as well");
  load_cmd->add_flag("--giant", load.giant, "Restrict to the largest connected component");

  TrafficOptions traffic;
  auto* traffic_cmd = app.add_subcommand("traffic", "Erramilli On/Off traces, calibration and Hurst estimates");
  traffic_cmd->add_option("--m1", traffic.m1)->capture_default_str();
  traffic_cmd->add_option("--m2", traffic.m2)->capture_default_str();
  traffic_cmd->add_option("--d", traffic.d, "Off/On threshold in (0, 1) (default 0.5)");
  traffic_cmd->add_option("--lambda", traffic.lambda, "Calibrate d for this On rate and print it");
  traffic_cmd->add_option("--tol", traffic.tol, "Calibration tolerance")->capture_default_str();
  traffic_cmd->add_option("--samples", traffic.samples, "Samples per calibration orbit")->capture_default_str();
  traffic_cmd->add_option("--length", traffic.length, "Trace length in bits")->capture_default_str();
  traffic_cmd->add_option("--seed", traffic.seed)->capture_default_str();
  traffic_cmd->add_option("--format", traffic.format, "Trace format")->check(CLI::IsMember({"rle", "raw"}))
      ->capture_default_str();
  traffic_cmd->add_option("--out", traffic.out, "Trace output path (default stdout)");
  traffic_cmd->add_flag("--hurst", traffic.hurst, "Print the aggregated-variance Hurst estimate to stderr");

  RunOptions runo;
  auto* run_cmd = app.add_subcommand("run", "Run one packet simulation");
  run_cmd->add_option("--in", runo.in, "Edge list (default: generate from --n/--avg-degree/--alpha)");
  add_gen_flags(run_cmd, runo.gen);
  run_cmd->add_option("--lambda", runo.lambda, "Target generation rate (calibrates d)");
  run_cmd->add_option("--d", runo.d, "Off/On threshold, used when --lambda is absent");
  run_cmd->add_option("--rho", runo.rho, "Host density")->capture_default_str();
  run_cmd->add_option("--m1", runo.m1)->capture_default_str();
  run_cmd->add_option("--m2", runo.m2)->capture_default_str();
  run_cmd->add_option("--warmup", runo.warmup)->capture_default_str();
  run_cmd->add_option("--steps", runo.steps, "Measurement window length")->capture_default_str();
  run_cmd->add_option("--out", runo.out, "Metrics CSV path (default stdout)");
  run_cmd->add_option("--queue-series", runo.queue_series, "Write step,total_queued CSV here");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Figure datasets over (alpha, lambda, seed)");
  sweep_cmd->add_option("--config", sweep.config, "key = value plan file");
  sweep_cmd->add_option("--only", sweep.only, "Which datasets to produce")
      ->check(CLI::IsMember({"all", "fig12", "fig34"}))
      ->capture_default_str();
  // Flag name -> plan key. Values stay strings so the plan parser validates them.
  const std::vector<std::pair<std::string, std::string>> sweep_flags{
      {"--n", "n"},         {"--avg-degree", "avg_degree"}, {"--alphas", "alphas"}, {"--lambdas", "lambdas"},
      {"--seeds", "seeds"}, {"--rho", "rho"},               {"--m1", "m1"},         {"--m2", "m2"},
      {"--warmup", "warmup"}, {"--steps", "steps"},         {"--out", "out"},       {"--threads", "threads"}};
  std::vector<std::string> sweep_values(sweep_flags.size());
  std::vector<CLI::Option*> sweep_opts;
  for (std::size_t i = 0; i < sweep_flags.size(); ++i)
    sweep_opts.push_back(sweep_cmd->add_option(sweep_flags[i].first, sweep_values[i]));
  bool queue_series = false;
  auto* qs_flag = sweep_cmd->add_flag("--queue-series", queue_series, "Write per-run queue-length series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_invalid;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*load_cmd) return cmd_load(load);
    if (*traffic_cmd) return cmd_traffic(traffic);
    if (*run_cmd) return cmd_run(runo);
    if (*sweep_cmd) {
      for (std::size_t i = 0; i < sweep_flags.size(); ++i)
        if (sweep_opts[i]->count() > 0) sweep.overrides.emplace_back(sweep_flags[i].second, sweep_values[i]);
      if (qs_flag->count() > 0) sweep.overrides.emplace_back("queue_series", queue_series ? "true" : "false");
      return cmd_sweep(sweep);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_ok;
}
