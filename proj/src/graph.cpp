#include "jobroute/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "jobroute/error.hpp"
#include "text_util.hpp"

namespace jobroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_comment_or_blank(std::string_view line) {
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') {
      continue;
    }
    return c == '#' || c == '%';
  }
  return true;
}

std::string line_context(const std::string& path, std::size_t lineno) {
  return path + ":" + std::to_string(lineno);
}

// Iterates non-empty lines of `content`, calling fn(lineno, line).
template <typename Fn>
void for_each_line(const std::string& content, Fn&& fn) {
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) {
      eol = content.size();
    }
    ++lineno;
    fn(lineno, std::string_view(content).substr(pos, eol - pos));
    pos = eol + 1;
    if (eol == content.size()) {
      break;
    }
  }
}

std::vector<LabeledEdge> parse_edge_list(const std::string& content,
                                         const std::string& path) {
  std::vector<LabeledEdge> edges;
  for_each_line(content, [&](std::size_t lineno, std::string_view line) {
    if (is_comment_or_blank(line)) {
      return;
    }
    auto tok = text::split_ws(line);
    if (tok.size() != 2 && tok.size() != 3) {
      throw Error(line_context(path, lineno) +
                  ": expected 'u v [w]', got " + std::to_string(tok.size()) +
                  " fields");
    }
    const auto ctx = line_context(path, lineno);
    LabeledEdge e;
    e.u = text::parse_i64(tok[0], ctx);
    e.v = text::parse_i64(tok[1], ctx);
    e.w = tok.size() == 3 ? text::parse_double(tok[2], ctx) : 1.0;
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error(ctx + ": non-positive edge weight " +
                  text::format_double(e.w));
    }
    edges.push_back(e);
  });
  return edges;
}

std::vector<LabeledEdge> parse_oldenburg(const std::string& content,
                                         const std::string& path) {
  std::vector<LabeledEdge> edges;
  for_each_line(content, [&](std::size_t lineno, std::string_view line) {
    if (is_comment_or_blank(line)) {
      return;
    }
    auto tok = text::split_ws(line);
    if (tok.size() != 4) {
      throw Error(line_context(path, lineno) +
                  ": expected 'edge_id u v w', got " +
                  std::to_string(tok.size()) + " fields");
    }
    const auto ctx = line_context(path, lineno);
    text::parse_i64(tok[0], ctx);  // edge id, unused
    LabeledEdge e;
    e.u = text::parse_i64(tok[1], ctx);
    e.v = text::parse_i64(tok[2], ctx);
    e.w = text::parse_double(tok[3], ctx);
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error(ctx + ": non-positive edge weight " +
                  text::format_double(e.w));
    }
    edges.push_back(e);
  });
  return edges;
}

struct MtxData {
  std::vector<LabeledEdge> edges;
  std::vector<PoiLabel> declared_nodes;
};

MtxData parse_matrix_market(const std::string& content,
                            const std::string& path) {
  MtxData data;
  bool banner_seen = false;
  bool pattern = false;
  bool dims_seen = false;
  std::int64_t n = 0;
  std::int64_t entries_expected = 0;
  std::int64_t entries_seen = 0;

  for_each_line(content, [&](std::size_t lineno, std::string_view line) {
    const auto ctx = line_context(path, lineno);
    if (!banner_seen) {
      if (line.rfind("%%MatrixMarket", 0) != 0) {
        throw Error(ctx + ": missing %%MatrixMarket header");
      }
      auto tok = text::split_ws(line);
      if (tok.size() < 4 || tok[1] != "matrix" || tok[2] != "coordinate") {
        throw Error(ctx + ": only 'matrix coordinate' files are supported");
      }
      if (tok[3] == "pattern") {
        pattern = true;
      } else if (tok[3] != "real" && tok[3] != "integer") {
        throw Error(ctx + ": unsupported field type '" + std::string(tok[3]) +
                    "'");
      }
      banner_seen = true;
      return;
    }
    if (is_comment_or_blank(line)) {
      return;
    }
    auto tok = text::split_ws(line);
    if (!dims_seen) {
      if (tok.size() != 3) {
        throw Error(ctx + ": expected dimension line 'n n m'");
      }
      n = text::parse_i64(tok[0], ctx);
      const auto cols = text::parse_i64(tok[1], ctx);
      entries_expected = text::parse_i64(tok[2], ctx);
      if (n <= 0 || cols != n) {
        throw Error(ctx + ": expected a square matrix, got " +
                    std::to_string(n) + " x " + std::to_string(cols));
      }
      dims_seen = true;
      return;
    }
    if (entries_seen == entries_expected) {
      throw Error(ctx + ": more entries than the dimension line declares");
    }
    if (tok.size() != (pattern ? 2u : 3u)) {
      throw Error(ctx + (pattern ? ": expected 'u v'" : ": expected 'u v w'"));
    }
    LabeledEdge e;
    e.u = text::parse_i64(tok[0], ctx);
    e.v = text::parse_i64(tok[1], ctx);
    e.w = pattern ? 1.0 : text::parse_double(tok[2], ctx);
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) {
      throw Error(ctx + ": node index out of range 1.." + std::to_string(n));
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error(ctx + ": non-positive edge weight " +
                  text::format_double(e.w));
    }
    data.edges.push_back(e);
    ++entries_seen;
  });

  if (!banner_seen || !dims_seen) {
    throw Error(path + ": truncated matrix-market file");
  }
  if (entries_seen != entries_expected) {
    throw Error(path + ": expected " + std::to_string(entries_expected) +
                " entries, found " + std::to_string(entries_seen));
  }
  data.declared_nodes.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    data.declared_nodes[static_cast<std::size_t>(i)] = i + 1;
  }
  return data;
}

} // namespace

GraphFormat parse_graph_format(const std::string& name) {
  if (name == "edgelist") {
    return GraphFormat::EdgeList;
  }
  if (name == "oldenburg") {
    return GraphFormat::Oldenburg;
  }
  if (name == "mtx") {
    return GraphFormat::MatrixMarket;
  }
  throw Error("unknown graph format '" + name +
              "' (expected edgelist, oldenburg or mtx)");
}

std::string to_string(GraphFormat format) {
  switch (format) {
  case GraphFormat::EdgeList:
    return "edgelist";
  case GraphFormat::Oldenburg:
    return "oldenburg";
  case GraphFormat::MatrixMarket:
    return "mtx";
  }
  return "?";
}

std::optional<PoiId> RoadNetwork::find_id(PoiLabel label) const {
  auto it = label_to_id_.find(label);
  if (it == label_to_id_.end()) {
    return std::nullopt;
  }
  return it->second;
}

PoiId RoadNetwork::to_id(PoiLabel label) const {
  auto id = find_id(label);
  if (!id) {
    throw Error("POI label " + std::to_string(label) +
                " is not in the network");
  }
  return *id;
}

RoadNetwork build_network(const std::vector<LabeledEdge>& edges,
                          const std::vector<PoiLabel>* declared_nodes,
                          std::size_t self_loops_dropped) {
  RoadNetwork net;
  net.self_loops_dropped_ = self_loops_dropped;

  std::vector<PoiLabel> labels;
  labels.reserve(edges.size() * 2);
  if (declared_nodes) {
    labels = *declared_nodes;
  }
  for (const auto& e : edges) {
    labels.push_back(e.u);
    labels.push_back(e.v);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.empty()) {
    throw Error("empty graph: no nodes");
  }
  net.labels_ = std::move(labels);
  net.label_to_id_.reserve(net.labels_.size());
  for (std::size_t i = 0; i < net.labels_.size(); ++i) {
    net.label_to_id_.emplace(net.labels_[i], static_cast<PoiId>(i));
  }

  // Collapse duplicate undirected edges to the minimum weight, drop loops.
  std::map<std::pair<PoiId, PoiId>, double> collapsed;
  for (const auto& e : edges) {
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error("non-positive edge weight between labels " +
                  std::to_string(e.u) + " and " + std::to_string(e.v));
    }
    if (e.u == e.v) {
      ++net.self_loops_dropped_;
      continue;
    }
    const PoiId a = net.label_to_id_.at(e.u);
    const PoiId b = net.label_to_id_.at(e.v);
    const auto key = std::minmax(a, b);
    auto [it, inserted] = collapsed.emplace(key, e.w);
    if (!inserted) {
      ++net.duplicates_collapsed_;
      it->second = std::min(it->second, e.w);
    }
  }

  net.edges_.reserve(collapsed.size());
  net.adjacency_.assign(net.labels_.size(), {});
  double weight_sum = 0.0;
  for (const auto& [key, w] : collapsed) {
    net.edges_.push_back({key.first, key.second, w});
    net.adjacency_[key.first].push_back({key.second, w});
    net.adjacency_[key.second].push_back({key.first, w});
    weight_sum += w;
  }
  net.mean_edge_weight_ =
      net.edges_.empty() ? 0.0 : weight_sum / static_cast<double>(net.edges_.size());
  return net;
}

RoadNetwork load_graph(const std::string& path, GraphFormat format) {
  const std::string content = text::read_file(path);
  switch (format) {
  case GraphFormat::EdgeList:
    return build_network(parse_edge_list(content, path));
  case GraphFormat::Oldenburg:
    return build_network(parse_oldenburg(content, path));
  case GraphFormat::MatrixMarket: {
    const auto data = parse_matrix_market(content, path);
    return build_network(data.edges, &data.declared_nodes);
  }
  }
  throw Error("unhandled graph format");
}

namespace {

void check_poi(const RoadNetwork& net, PoiId v, const char* what) {
  if (v < 0 || v >= net.poi_count()) {
    throw Error(std::string(what) + " POI id " + std::to_string(v) +
                " out of range 0.." + std::to_string(net.poi_count() - 1));
  }
}

} // namespace

std::optional<double> shortest_cost(const RoadNetwork& net, PoiId u, PoiId v) {
  check_poi(net, u, "source");
  check_poi(net, v, "target");
  if (u == v) {
    return 0.0;
  }

  // Dijkstra with lazy deletion, early exit once v settles.
  std::vector<double> dist(static_cast<std::size_t>(net.poi_count()), kInf);
  using Entry = std::pair<double, PoiId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[static_cast<std::size_t>(u)] = 0.0;
  queue.emplace(0.0, u);
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(x)]) {
      continue;
    }
    if (x == v) {
      return d;
    }
    for (const auto& nb : net.neighbors(x)) {
      const double nd = d + nb.w;
      if (nd < dist[static_cast<std::size_t>(nb.to)]) {
        dist[static_cast<std::size_t>(nb.to)] = nd;
        queue.emplace(nd, nb.to);
      }
    }
  }
  return std::nullopt;
}

std::vector<double> single_source_costs(const RoadNetwork& net, PoiId source) {
  check_poi(net, source, "source");
  std::vector<double> dist(static_cast<std::size_t>(net.poi_count()), kInf);
  using Entry = std::pair<double, PoiId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[static_cast<std::size_t>(source)] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(x)]) {
      continue;
    }
    for (const auto& nb : net.neighbors(x)) {
      const double nd = d + nb.w;
      if (nd < dist[static_cast<std::size_t>(nb.to)]) {
        dist[static_cast<std::size_t>(nb.to)] = nd;
        queue.emplace(nd, nb.to);
      }
    }
  }
  return dist;
}

int count_components(const RoadNetwork& net) {
  const auto n = static_cast<std::size_t>(net.poi_count());
  std::vector<bool> seen(n, false);
  std::vector<PoiId> stack;
  int components = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) {
      continue;
    }
    ++components;
    seen[start] = true;
    stack.push_back(static_cast<PoiId>(start));
    while (!stack.empty()) {
      const PoiId x = stack.back();
      stack.pop_back();
      for (const auto& nb : net.neighbors(x)) {
        if (!seen[static_cast<std::size_t>(nb.to)]) {
          seen[static_cast<std::size_t>(nb.to)] = true;
          stack.push_back(nb.to);
        }
      }
    }
  }
  return components;
}

} // namespace jobroute
