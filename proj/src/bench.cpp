#include "jobroute/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "jobroute/algorithms.hpp"
#include "jobroute/error.hpp"
#include "jobroute/rng.hpp"
#include "text_util.hpp"

namespace jobroute {

std::uint64_t derive_instance_seed(std::uint64_t master_seed, int k,
                                   std::uint64_t cell_seed) {
  return rng::mix(master_seed, static_cast<std::uint64_t>(k), cell_seed);
}

std::uint64_t derive_selector_seed(std::uint64_t instance_seed) {
  return rng::mix(instance_seed, 0xA15EEDULL);
}

namespace {

Schedule run_algorithm(const std::string& algo, const ProblemInstance& inst,
                       std::uint64_t selector_seed,
                       const OracleOptions& oracle) {
  if (algo == "bfs") {
    return select_best_first(inst);
  }
  if (algo == "nn") {
    return select_nearest_neighbor(inst);
  }
  if (algo == "random") {
    return select_random(inst, selector_seed);
  }
  if (algo == "ugreedy") {
    return select_utility_greedy(inst);
  }
  if (algo == "oracle") {
    return exact_optimal(inst, oracle);
  }
  throw Error("unknown algorithm '" + algo +
              "' (expected bfs, nn, random, ugreedy or oracle)");
}

struct Cell {
  int k;
  std::uint64_t seed;
};

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const RoadNetwork& net,
                                const TravelMetrics& metrics) {
  if (cfg.job_counts.empty() || cfg.algorithms.empty() || cfg.seeds.empty()) {
    throw Error("experiment config needs nonempty job_counts, algorithms "
                "and seeds");
  }

  std::vector<Cell> cells;
  for (int k : cfg.job_counts) {
    for (std::uint64_t seed : cfg.seeds) {
      cells.push_back({k, seed});
    }
  }

  // Each cell generates one instance and runs every algorithm on it, so
  // comparisons within the cell are paired. Cells are independent; rows are
  // written into per-cell slots, so the thread count cannot affect output.
  std::vector<std::vector<ResultRow>> slots(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size() || failed.load()) {
        return;
      }
      const Cell& cell = cells[i];
      try {
        const std::uint64_t instance_seed =
            derive_instance_seed(cfg.master_seed, cell.k, cell.seed);
        const ProblemInstance inst =
            generate_instance(net, metrics, cell.k, cfg.gen, instance_seed,
                              cfg.dataset, cfg.format);
        for (const auto& algo : cfg.algorithms) {
          const auto t0 = std::chrono::steady_clock::now();
          const Schedule s = run_algorithm(
              algo, inst, derive_selector_seed(instance_seed), cfg.oracle);
          const auto t1 = std::chrono::steady_clock::now();
          const auto violations = validate_schedule(inst, s);
          if (!violations.empty()) {
            throw Error("schedule validation failed for algorithm=" + algo +
                        " seed=" + std::to_string(cell.seed) +
                        " k=" + std::to_string(cell.k) + ": " +
                        violations.front().category + ": " +
                        violations.front().message);
          }
          ResultRow row;
          row.dataset = cfg.dataset;
          row.k = cell.k;
          row.algorithm = algo;
          row.seed = cell.seed;
          row.earned_utility = s.total_utility;
          row.jobs_performed = s.jobs_performed;
          row.budget_spent = s.total_travel_cost;
          row.wall_time_ms =
              cfg.record_timing
                  ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                  : 0.0;
          slots[i].push_back(std::move(row));
        }
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failed.exchange(true)) {
          failure = e.what();
        }
        return;
      }
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(work);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failed.load()) {
    throw Error(failure);
  }

  ExperimentResult result;
  for (auto& slot : slots) {
    for (auto& row : slot) {
      result.rows.push_back(std::move(row));
    }
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              return std::tie(a.dataset, a.k, a.algorithm, a.seed) <
                     std::tie(b.dataset, b.k, b.algorithm, b.seed);
            });
  result.aggregates = aggregate_rows(result.rows);
  return result;
}

std::vector<Aggregate> aggregate_rows(const std::vector<ResultRow>& rows) {
  std::vector<Aggregate> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].dataset == rows[i].dataset &&
           rows[j].k == rows[i].k && rows[j].algorithm == rows[i].algorithm) {
      ++j;
    }
    const auto n = static_cast<double>(j - i);
    Aggregate agg;
    agg.dataset = rows[i].dataset;
    agg.k = rows[i].k;
    agg.algorithm = rows[i].algorithm;
    agg.runs = j - i;
    double u_sum = 0.0;
    double jobs_sum = 0.0;
    double b_sum = 0.0;
    for (std::size_t r = i; r < j; ++r) {
      u_sum += rows[r].earned_utility;
      jobs_sum += static_cast<double>(rows[r].jobs_performed);
      b_sum += rows[r].budget_spent;
    }
    agg.utility_mean = u_sum / n;
    agg.jobs_mean = jobs_sum / n;
    agg.budget_mean = b_sum / n;
    double u_var = 0.0;
    double jobs_var = 0.0;
    for (std::size_t r = i; r < j; ++r) {
      u_var += (rows[r].earned_utility - agg.utility_mean) *
               (rows[r].earned_utility - agg.utility_mean);
      const double dj =
          static_cast<double>(rows[r].jobs_performed) - agg.jobs_mean;
      jobs_var += dj * dj;
    }
    agg.utility_std = n > 1.0 ? std::sqrt(u_var / (n - 1.0)) : 0.0;
    agg.jobs_std = n > 1.0 ? std::sqrt(jobs_var / (n - 1.0)) : 0.0;
    out.push_back(std::move(agg));
    i = j;
  }
  return out;
}

namespace {

void check_csv_safe(const std::string& s) {
  if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos) {
    throw Error("dataset/algorithm names must not contain commas or "
                "newlines: '" + s + "'");
  }
}

} // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "dataset,k,algorithm,seed,earned_utility,jobs_performed,"
         "budget_spent,wall_time_ms\n";
  for (const auto& r : rows) {
    check_csv_safe(r.dataset);
    check_csv_safe(r.algorithm);
    out << r.dataset << "," << r.k << "," << r.algorithm << "," << r.seed
        << "," << text::format_double(r.earned_utility) << ","
        << r.jobs_performed << "," << text::format_double(r.budget_spent)
        << "," << text::format_double(r.wall_time_ms) << "\n";
  }
  return out.str();
}

std::string aggregates_to_csv(const std::vector<Aggregate>& aggs) {
  std::ostringstream out;
  out << "dataset,k,algorithm,runs,utility_mean,utility_std,jobs_mean,"
         "jobs_std,budget_mean\n";
  for (const auto& a : aggs) {
    check_csv_safe(a.dataset);
    check_csv_safe(a.algorithm);
    out << a.dataset << "," << a.k << "," << a.algorithm << "," << a.runs
        << "," << text::format_double(a.utility_mean) << ","
        << text::format_double(a.utility_std) << ","
        << text::format_double(a.jobs_mean) << ","
        << text::format_double(a.jobs_std) << ","
        << text::format_double(a.budget_mean) << "\n";
  }
  return out.str();
}

std::string aggregate_out_path(const std::string& rows_path) {
  const auto dot = rows_path.rfind('.');
  const auto slash = rows_path.find_last_of("/\\");
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash)) {
    return rows_path + ".agg.csv";
  }
  return rows_path.substr(0, dot) + ".agg" + rows_path.substr(dot);
}

std::optional<std::uint64_t> find_nonmonotone_seed(const ExperimentConfig& cfg,
                                                   const RoadNetwork& net,
                                                   const TravelMetrics& metrics,
                                                   const std::string& algorithm,
                                                   int k_small, int k_large,
                                                   std::uint64_t max_tries) {
  if (k_small >= k_large) {
    throw Error("k_small must be less than k_large, got " +
                std::to_string(k_small) + " vs " + std::to_string(k_large));
  }
  auto utility_at = [&](int k, std::uint64_t cell_seed) {
    const std::uint64_t instance_seed =
        derive_instance_seed(cfg.master_seed, k, cell_seed);
    const ProblemInstance inst = generate_instance(
        net, metrics, k, cfg.gen, instance_seed, cfg.dataset, cfg.format);
    const Schedule s = run_algorithm(
        algorithm, inst, derive_selector_seed(instance_seed), cfg.oracle);
    return s.total_utility;
  };
  for (std::uint64_t seed = 0; seed < max_tries; ++seed) {
    if (utility_at(k_large, seed) < utility_at(k_small, seed)) {
      return seed;
    }
  }
  return std::nullopt;
}

namespace {

std::pair<double, double> parse_range(
    const std::vector<std::string_view>& tok, const std::string& ctx) {
  if (tok.size() != 3) {
    throw Error(ctx + ": expected two values");
  }
  return {text::parse_double(tok[1], ctx), text::parse_double(tok[2], ctx)};
}

} // namespace

ExperimentConfig experiment_config_from_string(const std::string& content) {
  ExperimentConfig cfg;
  bool graph_seen = false;
  bool out_seen = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) {
      eol = content.size();
    }
    auto line = std::string_view(content).substr(pos, eol - pos);
    const bool at_end = eol == content.size();
    pos = eol + 1;
    ++lineno;
    auto tok = text::split_ws(line);
    if (tok.empty() || tok[0].front() == '#') {
      if (at_end) {
        break;
      }
      continue;
    }
    const std::string ctx = "config line " + std::to_string(lineno);
    const auto& key = tok[0];
    if (key == "graph") {
      auto rest = line.substr(line.find("graph") + 5);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
        rest.remove_prefix(1);
      }
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) {
        rest.remove_suffix(1);
      }
      cfg.dataset = std::string(rest);
      graph_seen = true;
    } else if (key == "format" && tok.size() == 2) {
      cfg.format = parse_graph_format(std::string(tok[1]));
    } else if (key == "time_factor" && tok.size() == 2) {
      cfg.time_factor = text::parse_double(tok[1], ctx);
    } else if (key == "job_counts") {
      cfg.job_counts.clear();
      for (std::size_t i = 1; i < tok.size(); ++i) {
        cfg.job_counts.push_back(text::parse_int(tok[i], ctx));
      }
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (std::size_t i = 1; i < tok.size(); ++i) {
        cfg.algorithms.emplace_back(tok[i]);
      }
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (std::size_t i = 1; i < tok.size(); ++i) {
        cfg.seeds.push_back(text::parse_u64(tok[i], ctx));
      }
    } else if (key == "seed_count" && tok.size() == 2) {
      const auto count = text::parse_u64(tok[1], ctx);
      cfg.seeds.clear();
      for (std::uint64_t s = 0; s < count; ++s) {
        cfg.seeds.push_back(s);
      }
    } else if (key == "master_seed" && tok.size() == 2) {
      cfg.master_seed = text::parse_u64(tok[1], ctx);
    } else if (key == "t_range") {
      cfg.gen.t_range = parse_range(tok, ctx);
    } else if (key == "util_range") {
      cfg.gen.util_range = parse_range(tok, ctx);
    } else if (key == "duration_range") {
      cfg.gen.duration_range = parse_range(tok, ctx);
    } else if (key == "window") {
      const auto r = parse_range(tok, ctx);
      cfg.gen.window_start = r.first;
      cfg.gen.window_end = r.second;
    } else if (key == "budget" && tok.size() == 2) {
      cfg.gen.budget = text::parse_double(tok[1], ctx);
    } else if (key == "worker_start" && tok.size() == 2) {
      cfg.gen.worker_start = text::parse_i64(tok[1], ctx);
    } else if (key == "out") {
      auto rest = line.substr(line.find("out") + 3);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
        rest.remove_prefix(1);
      }
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) {
        rest.remove_suffix(1);
      }
      cfg.out_path = std::string(rest);
      out_seen = true;
    } else if (key == "threads" && tok.size() == 2) {
      cfg.threads = text::parse_int(tok[1], ctx);
    } else if (key == "timing" && tok.size() == 2) {
      if (tok[1] == "on") {
        cfg.record_timing = true;
      } else if (tok[1] == "off") {
        cfg.record_timing = false;
      } else {
        throw Error(ctx + ": timing must be 'on' or 'off'");
      }
    } else if (key == "oracle_max_jobs" && tok.size() == 2) {
      cfg.oracle.max_jobs =
          static_cast<std::size_t>(text::parse_u64(tok[1], ctx));
    } else if (key == "oracle_max_labels" && tok.size() == 2) {
      cfg.oracle.max_labels =
          static_cast<std::size_t>(text::parse_u64(tok[1], ctx));
    } else {
      throw Error(ctx + ": unknown key '" + std::string(key) + "'");
    }
    if (at_end) {
      break;
    }
  }
  if (!graph_seen) {
    throw Error("config: missing 'graph <path>' line");
  }
  (void)out_seen;  // out may be given on the command line instead
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_config_from_string(text::read_file(path));
}

} // namespace jobroute
