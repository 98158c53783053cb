#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "jobroute/graph.hpp"

namespace jobroute {

struct Travel {
  double cost;
  double time;
};

// Pairwise travel cost (shortest-path distance) and travel time
// (time_factor x cost) between POIs.
//
// Two storage modes:
//   FullApsp        - every source solved up front, n^2 table. Opt in; the
//                     table is 300 MB for a 6.1k-node network.
//   OnDemandCached  - default. A source's distance row is computed on first
//                     query and cached. Thread safe: each row is built at
//                     most once (call_once per source), queries afterwards
//                     are read-only.
class TravelMetrics {
public:
  enum class Mode { FullApsp, OnDemandCached };

  TravelMetrics(const RoadNetwork& net, double time_factor,
                Mode mode = Mode::OnDemandCached);

  TravelMetrics(const TravelMetrics&) = delete;
  TravelMetrics& operator=(const TravelMetrics&) = delete;

  const RoadNetwork& network() const { return *net_; }
  double time_factor() const { return time_factor_; }
  Mode mode() const { return mode_; }

  // nullopt when v is unreachable from u.
  std::optional<double> cost(PoiId u, PoiId v) const;
  std::optional<double> time(PoiId u, PoiId v) const;
  std::optional<Travel> travel(PoiId u, PoiId v) const;
  bool reachable(PoiId u, PoiId v) const;

private:
  struct SourceRow {
    std::once_flag once;
    std::vector<double> dist;
  };

  const std::vector<double>& row(PoiId source) const;

  const RoadNetwork* net_;
  double time_factor_;
  Mode mode_;
  std::vector<double> apsp_;                   // FullApsp: n*n, row-major
  mutable std::vector<SourceRow> cache_;       // OnDemandCached: per source
};

} // namespace jobroute
