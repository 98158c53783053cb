#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jobroute/graph.hpp"
#include "jobroute/metrics.hpp"

namespace jobroute {

using JobId = std::int64_t;

struct Job {
  JobId id;
  PoiId poi;           // internal id; files store the original label
  double utility;      // > 0
  double start_time;
  double duration;     // > 0

  double finish_time() const { return start_time + duration; }
};

struct Worker {
  PoiId start_poi;
  double window_start;
  double window_end;   // > window_start
  double budget;       // >= 0
};

struct GenParams {
  std::pair<double, double> t_range{1.0, 5000.0};
  std::pair<double, double> util_range{9000.0, 12000.0};
  std::pair<double, double> duration_range{10.0, 200.0};
  double window_start = 1.0;
  double window_end = 5000.0;
  // Defaults when unset: budget = 100 x mean edge weight of the network,
  // worker start = uniformly random POI (first draw of the seed).
  std::optional<double> budget;
  std::optional<PoiLabel> worker_start;
};

struct ProblemInstance {
  const RoadNetwork* network = nullptr;
  const TravelMetrics* metrics = nullptr;
  std::vector<Job> jobs;
  Worker worker{};
  std::uint64_t seed = 0;
  GenParams params;        // generation provenance, recorded in the file
  std::string dataset;     // graph path as given on generation
  GraphFormat format = GraphFormat::EdgeList;
};

// Draws k jobs (poi, start time, utility, duration all uniform over their
// ranges) plus the worker. Pure function of (seed, params, net); the draw
// order is part of the file format contract and never changes.
ProblemInstance generate_instance(const RoadNetwork& net,
                                  const TravelMetrics& metrics,
                                  int k,
                                  const GenParams& params,
                                  std::uint64_t seed,
                                  const std::string& dataset = "",
                                  GraphFormat format = GraphFormat::EdgeList);

// Instance text format v1; see README for the schema. Doubles are written
// in shortest round-trip form, so save/load/save is byte-stable.
void save_instance(const ProblemInstance& inst, const std::string& path);
std::string instance_to_string(const ProblemInstance& inst);

ProblemInstance load_instance(const std::string& path,
                              const RoadNetwork& net,
                              const TravelMetrics& metrics);
ProblemInstance instance_from_string(const std::string& text,
                                     const RoadNetwork& net,
                                     const TravelMetrics& metrics);

// Header fields needed to locate the graph an instance file refers to.
struct InstanceFileInfo {
  std::string dataset;
  GraphFormat format;
  double time_factor;
};
InstanceFileInfo peek_instance_file(const std::string& path);

} // namespace jobroute
