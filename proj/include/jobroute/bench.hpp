#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jobroute/instance.hpp"
#include "jobroute/oracle.hpp"

namespace jobroute {

struct ExperimentConfig {
  std::string dataset;                 // graph path, also the CSV dataset tag
  GraphFormat format = GraphFormat::EdgeList;
  double time_factor = 0.2;
  std::vector<int> job_counts{200, 400, 800};
  std::vector<std::string> algorithms{"bfs", "nn", "random", "ugreedy"};
  std::vector<std::uint64_t> seeds;    // cell seeds; see derive_instance_seed
  std::uint64_t master_seed = 0;
  GenParams gen;
  std::string out_path;                // rows CSV; aggregates go to *.agg.csv
  int threads = 1;
  // When off (default) the wall_time_ms column is written as 0 so that a
  // fixed config always produces byte-identical CSVs.
  bool record_timing = false;
  OracleOptions oracle;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_config_from_string(const std::string& text);

struct ResultRow {
  std::string dataset;
  int k;
  std::string algorithm;
  std::uint64_t seed;
  double earned_utility;
  std::size_t jobs_performed;
  double budget_spent;
  double wall_time_ms;
};

struct Aggregate {
  std::string dataset;
  int k;
  std::string algorithm;
  std::size_t runs;
  double utility_mean;
  double utility_std;    // sample standard deviation (n - 1)
  double jobs_mean;
  double jobs_std;
  double budget_mean;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;          // sorted by (dataset, k, algo, seed)
  std::vector<Aggregate> aggregates;
};

// Instance seed for a (k, cell seed) pair. Algorithm-independent so every
// algorithm in a cell sees the identical instance; jobs are re-sampled per k.
std::uint64_t derive_instance_seed(std::uint64_t master_seed, int k,
                                   std::uint64_t cell_seed);
// Seed for the random selector within a cell.
std::uint64_t derive_selector_seed(std::uint64_t instance_seed);

// Runs every (k, seed, algorithm) combination, validating each schedule
// before recording it (a violation aborts with the offending combination).
// Cells run in parallel across cfg.threads; output does not depend on the
// thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const RoadNetwork& net,
                                const TravelMetrics& metrics);

std::vector<Aggregate> aggregate_rows(const std::vector<ResultRow>& rows);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string aggregates_to_csv(const std::vector<Aggregate>& aggs);

// Derives the aggregate CSV path from the row CSV path: "x.csv" -> "x.agg.csv".
std::string aggregate_out_path(const std::string& rows_path);

// Searches cell seeds 0..max_tries-1 for one where the algorithm earns
// strictly less at k_large than at k_small (instances re-drawn per k).
// nullopt when no such seed is found; that is reported, not fatal.
std::optional<std::uint64_t> find_nonmonotone_seed(const ExperimentConfig& cfg,
                                                   const RoadNetwork& net,
                                                   const TravelMetrics& metrics,
                                                   const std::string& algorithm,
                                                   int k_small, int k_large,
                                                   std::uint64_t max_tries);

} // namespace jobroute
