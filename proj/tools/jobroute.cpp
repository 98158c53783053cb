// jobroute: select and sequence utility-paying jobs on a road network under
// a travel budget and per-job start times.
//
// Subcommands: gen, run, bench, validate, graph-info.
// Exit codes: 0 success, 1 usage error, 2 data or validation error.
// Logs go to stderr; data goes to stdout or to --out files.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jobroute/algorithms.hpp"
#include "jobroute/bench.hpp"
#include "jobroute/error.hpp"
#include "jobroute/graph.hpp"
#include "jobroute/instance.hpp"
#include "jobroute/metrics.hpp"
#include "jobroute/oracle.hpp"
#include "jobroute/schedule.hpp"
#include "text_util.hpp"

namespace {

using namespace jobroute;

struct GraphArgs {
  std::string path;
  std::string format = "edgelist";
  double time_factor = 0.2;
  bool full_apsp = false;
};

void add_graph_flags(CLI::App* cmd, GraphArgs& args, bool required) {
  auto* g = cmd->add_option("--graph", args.path, "Road network file");
  if (required) {
    g->required();
  }
  cmd->add_option("--format", args.format,
                  "Graph file format: edgelist, oldenburg or mtx")
      ->check(CLI::IsMember({"edgelist", "oldenburg", "mtx"}));
  cmd->add_option("--time-factor", args.time_factor,
                  "Travel time per unit travel cost")
      ->capture_default_str();
  cmd->add_flag("--full-apsp", args.full_apsp,
                "Precompute the full distance table instead of caching "
                "per-source rows on demand");
}

RoadNetwork load_net(const GraphArgs& args) {
  auto net = load_graph(args.path, parse_graph_format(args.format));
  if (net.self_loops_dropped() > 0) {
    std::cerr << "warning: dropped " << net.self_loops_dropped()
              << " self-loop(s) in " << args.path << "\n";
  }
  return net;
}

TravelMetrics make_metrics(const RoadNetwork& net, const GraphArgs& args) {
  return TravelMetrics(net, args.time_factor,
                       args.full_apsp ? TravelMetrics::Mode::FullApsp
                                      : TravelMetrics::Mode::OnDemandCached);
}

struct WorkerFlags {
  std::optional<double> budget;
  std::optional<std::int64_t> worker_start;
  std::optional<std::string> window;  // "ws:wf"
};

void add_worker_flags(CLI::App* cmd, WorkerFlags& w) {
  cmd->add_option("--budget", w.budget,
                  "Travel budget (default: 100 x mean edge weight)");
  cmd->add_option("--worker-start", w.worker_start,
                  "Worker start POI label (default: random POI)");
  cmd->add_option("--window", w.window,
                  "Working window as start:end (default 1:5000)");
}

void apply_worker_flags(const WorkerFlags& w, GenParams& gen) {
  if (w.budget) {
    gen.budget = *w.budget;
  }
  if (w.worker_start) {
    gen.worker_start = *w.worker_start;
  }
  if (w.window) {
    const auto colon = w.window->find(':');
    if (colon == std::string::npos) {
      throw Error("--window expects start:end, got '" + *w.window + "'");
    }
    gen.window_start =
        text::parse_double(std::string_view(*w.window).substr(0, colon),
                           "--window");
    gen.window_end =
        text::parse_double(std::string_view(*w.window).substr(colon + 1),
                           "--window");
  }
}

int cmd_gen(const GraphArgs& gargs, int jobs, std::uint64_t seed,
            double t_max, double util_min, double util_max, double dur_min,
            double dur_max, const WorkerFlags& wflags,
            const std::string& out) {
  const RoadNetwork net = load_net(gargs);
  const TravelMetrics metrics = make_metrics(net, gargs);
  GenParams gen;
  gen.t_range = {1.0, t_max};
  gen.util_range = {util_min, util_max};
  gen.duration_range = {dur_min, dur_max};
  apply_worker_flags(wflags, gen);
  const ProblemInstance inst =
      generate_instance(net, metrics, jobs, gen, seed, gargs.path,
                        parse_graph_format(gargs.format));
  if (out.empty()) {
    std::cout << instance_to_string(inst);
  } else {
    save_instance(inst, out);
    std::cerr << "wrote " << inst.jobs.size() << " jobs to " << out << "\n";
  }
  return 0;
}

int cmd_run(const std::string& instance_path, const GraphArgs& gargs,
            bool graph_given, const std::string& algo, std::uint64_t seed,
            bool strict_batch, bool nn_allow_negative,
            const OracleOptions& oracle, const std::string& out) {
  GraphArgs resolved = gargs;
  if (!graph_given) {
    const auto info = peek_instance_file(instance_path);
    resolved.path = info.dataset;
    resolved.format = to_string(info.format);
    resolved.time_factor = info.time_factor;
  }
  const RoadNetwork net = load_net(resolved);
  const TravelMetrics metrics = make_metrics(net, resolved);
  const ProblemInstance inst = load_instance(instance_path, net, metrics);

  Schedule schedule;
  ScheduleMeta meta;
  meta.algorithm = algo;
  meta.instance_path = instance_path;
  if (algo == "bfs") {
    schedule = select_best_first(inst, {strict_batch});
  } else if (algo == "nn") {
    schedule = select_nearest_neighbor(inst, {nn_allow_negative});
  } else if (algo == "random") {
    schedule = select_random(inst, seed);
    meta.seed = seed;
  } else if (algo == "ugreedy") {
    schedule = select_utility_greedy(inst);
  } else if (algo == "oracle") {
    schedule = exact_optimal(inst, oracle);
  } else {
    throw Error("unknown algorithm '" + algo + "'");
  }

  const auto violations = validate_schedule(inst, schedule);
  if (out.empty()) {
    std::cout << schedule_to_string(schedule, meta, net);
  } else {
    save_schedule(schedule, meta, net, out);
  }
  std::cerr << "algorithm=" << algo << " jobs=" << schedule.jobs_performed
            << " utility=" << text::format_double(schedule.total_utility)
            << " travel_cost="
            << text::format_double(schedule.total_travel_cost) << "\n";
  if (!violations.empty()) {
    for (const auto& v : violations) {
      std::cerr << "violation: " << v.category << ": " << v.message << "\n";
    }
    return 2;
  }
  return 0;
}

int cmd_validate(const std::string& instance_path, const GraphArgs& gargs,
                 bool graph_given, const std::string& schedule_path) {
  GraphArgs resolved = gargs;
  if (!graph_given) {
    const auto info = peek_instance_file(instance_path);
    resolved.path = info.dataset;
    resolved.format = to_string(info.format);
    resolved.time_factor = info.time_factor;
  }
  const RoadNetwork net = load_net(resolved);
  const TravelMetrics metrics = make_metrics(net, resolved);
  const ProblemInstance inst = load_instance(instance_path, net, metrics);
  const auto [schedule, meta] = load_schedule(schedule_path, net);
  const auto violations = validate_schedule(inst, schedule);
  if (violations.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  for (const auto& v : violations) {
    std::cout << "violation: " << v.category << ": " << v.message << "\n";
  }
  return 2;
}

int cmd_graph_info(const GraphArgs& gargs) {
  const RoadNetwork net = load_net(gargs);
  const auto n = net.poi_count();
  const auto m = net.edge_count();
  std::cout << "n=" << n << "\n";
  std::cout << "m=" << m << "\n";
  std::cout << "components=" << count_components(net) << "\n";
  std::cout << "mean_edge_weight=" << text::format_double(net.mean_edge_weight())
            << "\n";
  const double nf = static_cast<double>(n);
  std::cout << "density="
            << text::format_double(n > 1 ? static_cast<double>(m) /
                                               (nf * (nf - 1.0) / 2.0)
                                         : 0.0)
            << "\n";
  std::cout << "avg_degree="
            << text::format_double(2.0 * static_cast<double>(m) / nf) << "\n";
  std::cout << "self_loops_dropped=" << net.self_loops_dropped() << "\n";
  std::cout << "duplicate_edges_collapsed=" << net.duplicate_edges_collapsed()
            << "\n";
  return 0;
}

int cmd_bench(ExperimentConfig cfg, const std::string& out_override,
              bool find_nonmonotone, const std::string& nm_algo, int k_small,
              int k_large, std::uint64_t max_tries) {
  if (!out_override.empty()) {
    cfg.out_path = out_override;
  }
  GraphArgs gargs;
  gargs.path = cfg.dataset;
  gargs.format = to_string(cfg.format);
  gargs.time_factor = cfg.time_factor;
  const RoadNetwork net = load_net(gargs);
  const TravelMetrics metrics = make_metrics(net, gargs);

  if (find_nonmonotone) {
    const auto seed = find_nonmonotone_seed(cfg, net, metrics, nm_algo,
                                            k_small, k_large, max_tries);
    if (seed) {
      std::cout << "nonmonotone_seed=" << *seed << "\n";
      return 0;
    }
    std::cout << "nonmonotone_seed=not-found tries=" << max_tries << "\n";
    return 0;
  }

  if (cfg.out_path.empty()) {
    throw Error("bench needs --out (or an 'out' line in the config)");
  }
  const auto result = run_experiment(cfg, net, metrics);
  text::write_file(cfg.out_path, rows_to_csv(result.rows));
  const std::string agg_path = aggregate_out_path(cfg.out_path);
  text::write_file(agg_path, aggregates_to_csv(result.aggregates));
  std::cerr << "wrote " << result.rows.size() << " rows to " << cfg.out_path
            << " and " << result.aggregates.size() << " aggregates to "
            << agg_path << "\n";
  std::cout << aggregates_to_csv(result.aggregates);
  return 0;
}

} // namespace

int main(int argc, char** argv) try {
  CLI::App app{"Utility-driven job selection on road networks", "jobroute"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "jobroute 0.1.0");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random problem instance");
  GraphArgs gen_graph;
  add_graph_flags(gen, gen_graph, true);
  int gen_jobs = 0;
  std::uint64_t gen_seed = 0;
  double t_max = 5000.0;
  double util_min = 9000.0;
  double util_max = 12000.0;
  double dur_min = 10.0;
  double dur_max = 200.0;
  WorkerFlags gen_worker;
  std::string gen_out;
  gen->add_option("--jobs", gen_jobs, "Number of jobs to draw")->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->required();
  gen->add_option("--t-max", t_max, "Latest job start time (starts are "
                  "uniform over [1, t-max])")->capture_default_str();
  gen->add_option("--util-min", util_min, "Minimum job utility")
      ->capture_default_str();
  gen->add_option("--util-max", util_max, "Maximum job utility")
      ->capture_default_str();
  gen->add_option("--dur-min", dur_min, "Minimum job duration")
      ->capture_default_str();
  gen->add_option("--dur-max", dur_max, "Maximum job duration")
      ->capture_default_str();
  add_worker_flags(gen, gen_worker);
  gen->add_option("--out", gen_out, "Instance file to write (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "Run one algorithm on an instance");
  std::string run_instance;
  GraphArgs run_graph;
  std::string run_algo;
  std::uint64_t run_seed = 0;
  bool strict_batch = false;
  bool nn_allow_negative = false;
  OracleOptions run_oracle;
  std::string run_out;
  run->add_option("--instance", run_instance, "Instance file")->required();
  add_graph_flags(run, run_graph, false);
  run->add_option("--algo", run_algo,
                  "Algorithm: bfs, nn, random, ugreedy or oracle")
      ->required()
      ->check(CLI::IsMember({"bfs", "nn", "random", "ugreedy", "oracle"}));
  run->add_option("--seed", run_seed, "Seed for the random algorithm")
      ->capture_default_str();
  run->add_flag("--alg1-strict-batch", strict_batch,
                "bfs: restrict each round to the next equal-start-time batch");
  run->add_flag("--nn-allow-negative", nn_allow_negative,
                "nn: allow committing negative-priority (net-loss) moves");
  run->add_option("--oracle-max-jobs", run_oracle.max_jobs,
                  "oracle: refuse instances with more jobs than this")
      ->capture_default_str();
  run->add_option("--oracle-max-labels", run_oracle.max_labels,
                  "oracle: abort when the label count exceeds this")
      ->capture_default_str();
  run->add_option("--out", run_out, "Schedule file to write (default stdout)");

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Sweep job counts x algorithms x seeds and write CSVs");
  std::string bench_config;
  GraphArgs bench_graph;
  std::string bench_k;
  std::string bench_algos;
  std::uint64_t bench_seed_count = 0;
  std::string bench_seeds;
  std::uint64_t bench_master_seed = 0;
  std::string bench_out;
  int bench_threads = 1;
  bool bench_timing = false;
  WorkerFlags bench_worker;
  bool find_nm = false;
  std::string nm_algo = "bfs";
  int nm_k_small = 200;
  int nm_k_large = 400;
  std::uint64_t nm_tries = 1000;
  bench->add_option("--config", bench_config,
                    "Config file (flags below override it)");
  add_graph_flags(bench, bench_graph, false);
  bench->add_option("--job-counts", bench_k,
                    "Comma-separated job counts, e.g. 200,400,800");
  bench->add_option("--algos", bench_algos,
                    "Comma-separated algorithms, e.g. bfs,nn,random,ugreedy");
  bench->add_option("--seed-count", bench_seed_count,
                    "Use cell seeds 0..N-1");
  bench->add_option("--seeds", bench_seeds, "Comma-separated cell seeds");
  bench->add_option("--master-seed", bench_master_seed,
                    "Master seed mixed into every instance seed")
      ->capture_default_str();
  add_worker_flags(bench, bench_worker);
  bench->add_option("--out", bench_out, "Rows CSV path (aggregates go to "
                    "<out>.agg.csv alongside)");
  bench->add_option("--threads", bench_threads,
                    "Worker threads (output is identical for any value)")
      ->capture_default_str();
  bench->add_flag("--timing", bench_timing,
                  "Record wall times in the CSV (breaks byte-for-byte "
                  "reproducibility)");
  bench->add_flag("--find-nonmonotone", find_nm,
                  "Search for a seed where more jobs earn less utility");
  bench->add_option("--nm-algo", nm_algo, "Algorithm for the search")
      ->capture_default_str();
  bench->add_option("--nm-k-small", nm_k_small, "Smaller job count")
      ->capture_default_str();
  bench->add_option("--nm-k-large", nm_k_large, "Larger job count")
      ->capture_default_str();
  bench->add_option("--nm-max-tries", nm_tries, "Seeds to try before giving up")
      ->capture_default_str();

  // validate
  auto* validate = app.add_subcommand(
      "validate", "Check a schedule file against its instance");
  std::string val_instance;
  std::string val_schedule;
  GraphArgs val_graph;
  validate->add_option("--instance", val_instance, "Instance file")
      ->required();
  validate->add_option("--schedule", val_schedule, "Schedule file")
      ->required();
  add_graph_flags(validate, val_graph, false);

  // graph-info
  auto* ginfo = app.add_subcommand("graph-info",
                                   "Print statistics of a road network file");
  GraphArgs info_graph;
  add_graph_flags(ginfo, info_graph, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen(gen_graph, gen_jobs, gen_seed, t_max, util_min, util_max,
                     dur_min, dur_max, gen_worker, gen_out);
    }
    if (run->parsed()) {
      return cmd_run(run_instance, run_graph, run->count("--graph") > 0,
                     run_algo, run_seed, strict_batch, nn_allow_negative,
                     run_oracle, run_out);
    }
    if (bench->parsed()) {
      ExperimentConfig cfg;
      if (!bench_config.empty()) {
        cfg = load_experiment_config(bench_config);
      }
      if (bench->count("--graph") > 0) {
        cfg.dataset = bench_graph.path;
        cfg.format = parse_graph_format(bench_graph.format);
      }
      if (bench->count("--time-factor") > 0) {
        cfg.time_factor = bench_graph.time_factor;
      }
      if (cfg.dataset.empty()) {
        throw Error("bench needs --graph or a config file with a graph line");
      }
      auto split_list = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= s.size()) {
          auto comma = s.find(',', start);
          if (comma == std::string::npos) {
            comma = s.size();
          }
          if (comma > start) {
            out.push_back(s.substr(start, comma - start));
          }
          start = comma + 1;
          if (comma == s.size()) {
            break;
          }
        }
        return out;
      };
      if (!bench_k.empty()) {
        cfg.job_counts.clear();
        for (const auto& v : split_list(bench_k)) {
          cfg.job_counts.push_back(text::parse_int(v, "--job-counts"));
        }
      }
      if (!bench_algos.empty()) {
        cfg.algorithms = split_list(bench_algos);
      }
      if (bench_seed_count > 0) {
        cfg.seeds.clear();
        for (std::uint64_t s = 0; s < bench_seed_count; ++s) {
          cfg.seeds.push_back(s);
        }
      }
      if (!bench_seeds.empty()) {
        cfg.seeds.clear();
        for (const auto& v : split_list(bench_seeds)) {
          cfg.seeds.push_back(text::parse_u64(v, "--seeds"));
        }
      }
      if (bench->count("--master-seed") > 0) {
        cfg.master_seed = bench_master_seed;
      }
      if (bench->count("--threads") > 0) {
        cfg.threads = bench_threads;
      }
      if (bench_timing) {
        cfg.record_timing = true;
      }
      apply_worker_flags(bench_worker, cfg.gen);
      return cmd_bench(std::move(cfg), bench_out, find_nm, nm_algo,
                       nm_k_small, nm_k_large, nm_tries);
    }
    if (validate->parsed()) {
      return cmd_validate(val_instance, val_graph,
                          validate->count("--graph") > 0, val_schedule);
    }
    if (ginfo->parsed()) {
      return cmd_graph_info(info_graph);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
} catch (const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 2;
}
