#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace jobroute {

using PoiId = int;              // dense internal id, 0 .. poi_count()-1
using PoiLabel = std::int64_t;  // node label as it appears in the dataset

struct LabeledEdge {
  PoiLabel u;
  PoiLabel v;
  double w;
};

struct Edge {
  PoiId u;
  PoiId v;
  double w;
};

enum class GraphFormat { EdgeList, Oldenburg, MatrixMarket };

// Accepted names: "edgelist", "oldenburg", "mtx".
GraphFormat parse_graph_format(const std::string& name);
std::string to_string(GraphFormat format);

// Simple weighted undirected graph over POIs. Node labels are remapped to
// dense internal ids (ascending label order); the original labels are kept
// for file I/O. Immutable once built and safe to share across threads.
class RoadNetwork {
public:
  struct Neighbor {
    PoiId to;
    double w;
  };

  PoiId poi_count() const { return static_cast<PoiId>(labels_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Neighbor>& neighbors(PoiId v) const { return adjacency_[v]; }

  PoiLabel label(PoiId v) const { return labels_[v]; }
  const std::vector<PoiLabel>& labels() const { return labels_; }
  std::optional<PoiId> find_id(PoiLabel label) const;
  // Throws Error for labels not present in the network.
  PoiId to_id(PoiLabel label) const;

  double mean_edge_weight() const { return mean_edge_weight_; }
  std::size_t self_loops_dropped() const { return self_loops_dropped_; }
  std::size_t duplicate_edges_collapsed() const { return duplicates_collapsed_; }

  friend RoadNetwork build_network(const std::vector<LabeledEdge>& edges,
                                   const std::vector<PoiLabel>* declared_nodes,
                                   std::size_t self_loops_dropped);

private:
  std::vector<PoiLabel> labels_;
  std::unordered_map<PoiLabel, PoiId> label_to_id_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  double mean_edge_weight_ = 0.0;
  std::size_t self_loops_dropped_ = 0;
  std::size_t duplicates_collapsed_ = 0;
};

// Builds a network from raw edges: drops self-loops (counted), collapses
// duplicate undirected edges keeping the minimum weight, rejects non-positive
// weights and empty graphs. `declared_nodes` adds isolated nodes that appear
// in a dataset header but on no edge (matrix-market dimension line).
RoadNetwork build_network(const std::vector<LabeledEdge>& edges,
                          const std::vector<PoiLabel>* declared_nodes = nullptr,
                          std::size_t self_loops_dropped = 0);

RoadNetwork load_graph(const std::string& path, GraphFormat format);

// Single-pair shortest-path distance; std::nullopt when v is not reachable
// from u. Cost of the empty path is 0, so shortest_cost(net, v, v) == 0.
std::optional<double> shortest_cost(const RoadNetwork& net, PoiId u, PoiId v);

// Distances from `source` to every node; unreachable entries are +infinity.
std::vector<double> single_source_costs(const RoadNetwork& net, PoiId source);

int count_components(const RoadNetwork& net);

} // namespace jobroute
