#pragma once

// Shared test helpers: an independent Floyd-Warshall reference, random
// graph/instance generators and a few fixture graphs. The reference code
// here must stay independent of the Dijkstra/metrics implementation paths
// it is used to check.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "jobroute/graph.hpp"
#include "jobroute/instance.hpp"
#include "jobroute/metrics.hpp"
#include "jobroute/rng.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(JOBROUTE_DATA_DIR) + "/" + name;
}

// All-pairs reference by Floyd-Warshall over the raw labeled edge list
// (parallel edges folded by min, self-loops ignored). Indexed by the dense
// ids of the network under test, via net.find_id.
class FloydWarshallRef {
public:
  FloydWarshallRef(const std::vector<jobroute::LabeledEdge>& edges,
                   const jobroute::RoadNetwork& net) {
    n_ = static_cast<std::size_t>(net.poi_count());
    const double inf = std::numeric_limits<double>::infinity();
    dist_.assign(n_ * n_, inf);
    for (std::size_t v = 0; v < n_; ++v) {
      dist_[v * n_ + v] = 0.0;
    }
    for (const auto& e : edges) {
      if (e.u == e.v) {
        continue;
      }
      const auto a = static_cast<std::size_t>(*net.find_id(e.u));
      const auto b = static_cast<std::size_t>(*net.find_id(e.v));
      if (e.w < dist_[a * n_ + b]) {
        dist_[a * n_ + b] = e.w;
        dist_[b * n_ + a] = e.w;
      }
    }
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          const double via = dist_[i * n_ + k] + dist_[k * n_ + j];
          if (via < dist_[i * n_ + j]) {
            dist_[i * n_ + j] = via;
          }
        }
      }
    }
  }

  double operator()(jobroute::PoiId u, jobroute::PoiId v) const {
    return dist_[static_cast<std::size_t>(u) * n_ +
                 static_cast<std::size_t>(v)];
  }

private:
  std::size_t n_ = 0;
  std::vector<double> dist_;
};

// The 4-node cycle fixture used across the suites. Shortest costs, from the
// Floyd-Warshall reference: C(1,2)=1, C(2,3)=1, C(1,3)=2, C(1,4)=1,
// C(2,4)=2, C(3,4)=3 (the direct 3-4 edge of weight 5 is dominated).
inline std::vector<jobroute::LabeledEdge> cycle4_edges() {
  return {{1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 5.0}, {4, 1, 1.0}};
}

// Random connected graph: spanning tree plus `extra` chords, weights
// uniform in [1, 10].
inline std::vector<jobroute::LabeledEdge> random_graph_edges(
    jobroute::rng::Engine& eng, int n, int extra) {
  using jobroute::rng::uniform_index;
  using jobroute::rng::uniform_real;
  std::vector<jobroute::LabeledEdge> edges;
  for (int i = 1; i < n; ++i) {
    const auto j = static_cast<std::int64_t>(
        uniform_index(eng, static_cast<std::uint64_t>(i)));
    edges.push_back({i + 1, j + 1, uniform_real(eng, 1.0, 10.0)});
  }
  for (int c = 0; c < extra; ++c) {
    const auto u = static_cast<std::int64_t>(
        uniform_index(eng, static_cast<std::uint64_t>(n)));
    const auto v = static_cast<std::int64_t>(
        uniform_index(eng, static_cast<std::uint64_t>(n)));
    if (u == v) {
      continue;
    }
    edges.push_back({u + 1, v + 1, uniform_real(eng, 1.0, 10.0)});
  }
  return edges;
}

// Owns a network + metrics pair so tests can hand out ProblemInstances
// whose pointers stay valid.
struct Fixture {
  std::unique_ptr<jobroute::RoadNetwork> net;
  std::unique_ptr<jobroute::TravelMetrics> metrics;

  Fixture(std::vector<jobroute::LabeledEdge> edges, double time_factor,
          jobroute::TravelMetrics::Mode mode =
              jobroute::TravelMetrics::Mode::OnDemandCached) {
    net = std::make_unique<jobroute::RoadNetwork>(
        jobroute::build_network(std::move(edges)));
    metrics = std::make_unique<jobroute::TravelMetrics>(*net, time_factor,
                                                        mode);
  }

  jobroute::ProblemInstance instance(std::vector<jobroute::Job> jobs,
                                     jobroute::Worker worker) const {
    jobroute::ProblemInstance inst;
    inst.network = net.get();
    inst.metrics = metrics.get();
    inst.jobs = std::move(jobs);
    inst.worker = worker;
    return inst;
  }
};

// The hand-traced 6-job fixture on the 4-node cycle (time factor 0.2).
// Worker starts at POI 1 with window [0, 1000] and budget 6. The expected
// selector outputs in test_algorithms.cpp were derived by stepping through
// the selection rules against the costs listed above before the selectors
// were implemented.
inline Fixture cycle4_fixture() {
  return Fixture(cycle4_edges(), 0.2);
}

inline std::vector<jobroute::Job> six_jobs(const jobroute::RoadNetwork& net) {
  auto at = [&](std::int64_t label) { return net.to_id(label); };
  return {
      {1, at(2), 10.0, 1.0, 2.0},   // finish 3
      {2, at(3), 8.0, 1.0, 1.0},    // finish 2
      {3, at(4), 30.0, 6.0, 2.0},   // finish 8
      {4, at(1), 3.4, 4.0, 1.0},    // finish 5
      {5, at(3), 12.0, 9.0, 3.0},   // finish 12
      {6, at(2), 0.5, 14.0, 1.0},   // finish 15
  };
}

inline jobroute::Worker cycle4_worker(const jobroute::RoadNetwork& net) {
  return {net.to_id(1), 0.0, 1000.0, 6.0};
}

inline std::string write_temp(const std::string& name,
                              const std::string& content) {
  const auto path =
      (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  return path;
}

} // namespace testutil
