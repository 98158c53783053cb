#include <doctest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include "jobroute/error.hpp"
#include "jobroute/graph.hpp"
#include "jobroute/metrics.hpp"
#include "jobroute/rng.hpp"
#include "testutil.hpp"

using namespace jobroute;
using testutil::FloydWarshallRef;

TEST_CASE("oldenburg format: direct transcription") {
  const auto path = testutil::write_temp(
      "jr_olden_small.txt", "0 0 1 36.6\n1 1 2 10.0\n");
  const auto net = load_graph(path, GraphFormat::Oldenburg);
  CHECK(net.poi_count() == 3);
  CHECK(net.edge_count() == 2);
  CHECK(net.label(net.to_id(0)) == 0);
  CHECK(*shortest_cost(net, net.to_id(0), net.to_id(1)) == doctest::Approx(36.6));
}

TEST_CASE("edge list: duplicate undirected edges collapse to the minimum") {
  const auto path = testutil::write_temp(
      "jr_dupe.txt", "# comment\n% another\n1 2 5.0\n2 1 4.0\n");
  const auto net = load_graph(path, GraphFormat::EdgeList);
  CHECK(net.poi_count() == 2);
  CHECK(net.edge_count() == 1);
  CHECK(net.duplicate_edges_collapsed() == 1);
  CHECK(net.edges()[0].w == 4.0);
}

TEST_CASE("edge list: missing weight defaults to 1, self-loops counted") {
  const auto path = testutil::write_temp("jr_default_w.txt",
                                         "1 2\n2 3 2.5\n3 3 9.0\n");
  const auto net = load_graph(path, GraphFormat::EdgeList);
  CHECK(net.edge_count() == 2);
  CHECK(net.self_loops_dropped() == 1);
  CHECK(net.edges()[0].w == 1.0);
}

TEST_CASE("loader errors carry line numbers") {
  SUBCASE("malformed line") {
    const auto path =
        testutil::write_temp("jr_bad_line.txt", "1 2 1.0\n1 2 3 4 5\n");
    CHECK_THROWS_WITH_AS(load_graph(path, GraphFormat::EdgeList),
                         doctest::Contains(":2:"), Error);
  }
  SUBCASE("non-positive weight") {
    const auto path =
        testutil::write_temp("jr_bad_w.txt", "1 2 1.0\n2 3 -4\n");
    CHECK_THROWS_WITH_AS(load_graph(path, GraphFormat::EdgeList),
                         doctest::Contains("non-positive"), Error);
  }
  SUBCASE("empty graph") {
    const auto path = testutil::write_temp("jr_empty.txt", "# nothing\n");
    CHECK_THROWS_WITH_AS(load_graph(path, GraphFormat::EdgeList),
                         doctest::Contains("empty graph"), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_graph("/nonexistent/g.txt", GraphFormat::EdgeList),
                    Error);
  }
}

TEST_CASE("matrix market: real, pattern and isolated nodes") {
  SUBCASE("real symmetric") {
    const auto path = testutil::write_temp(
        "jr_real.mtx",
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "% comment\n"
        "3 3 2\n1 2 1.5\n2 3 2.5\n");
    const auto net = load_graph(path, GraphFormat::MatrixMarket);
    CHECK(net.poi_count() == 3);
    CHECK(net.edge_count() == 2);
  }
  SUBCASE("pattern gets weight 1, header nodes may be isolated") {
    const auto path = testutil::write_temp(
        "jr_pattern.mtx",
        "%%MatrixMarket matrix coordinate pattern symmetric\n"
        "4 4 2\n1 2\n2 3\n");
    const auto net = load_graph(path, GraphFormat::MatrixMarket);
    CHECK(net.poi_count() == 4);  // node 4 isolated but declared
    CHECK(net.edge_count() == 2);
    CHECK(net.edges()[0].w == 1.0);
    CHECK_FALSE(shortest_cost(net, net.to_id(1), net.to_id(4)).has_value());
  }
  SUBCASE("entry count must match the dimension line") {
    const auto path = testutil::write_temp(
        "jr_short.mtx",
        "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 1.0\n");
    CHECK_THROWS_WITH_AS(load_graph(path, GraphFormat::MatrixMarket),
                         doctest::Contains("expected 2 entries"), Error);
  }
}

TEST_CASE("shortest_cost on the 4-node cycle matches the reference") {
  const auto edges = testutil::cycle4_edges();
  const auto net = build_network(edges);
  const FloydWarshallRef ref(edges, net);

  const auto c = [&](PoiLabel a, PoiLabel b) {
    return shortest_cost(net, net.to_id(a), net.to_id(b));
  };
  CHECK(*c(1, 1) == 0.0);
  // Frozen from the reference: 1-2-3 beats nothing shorter.
  CHECK(*c(1, 3) == 2.0);
  CHECK(ref(net.to_id(1), net.to_id(3)) == 2.0);
  // Path 3-2-1-4 (cost 3) beats the direct 3-4 edge (cost 5).
  CHECK(*c(3, 4) == 3.0);
  CHECK(ref(net.to_id(3), net.to_id(4)) == 3.0);
}

TEST_CASE("shortest_cost signals unreachable across components") {
  const auto net = build_network({{1, 2, 1.0}, {3, 4, 1.0}});
  CHECK_FALSE(shortest_cost(net, net.to_id(1), net.to_id(3)).has_value());
  CHECK(count_components(net) == 2);
}

TEST_CASE("100 random small graphs: Dijkstra equals Floyd-Warshall") {
  rng::Engine eng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng::uniform_index(eng, 11));
    const int extra = static_cast<int>(rng::uniform_index(eng, 12));
    auto edges = testutil::random_graph_edges(eng, n, extra);
    // Sprinkle duplicates to exercise the collapse rule.
    if (edges.size() > 1) {
      edges.push_back({edges[0].u, edges[0].v, edges[0].w + 1.0});
    }
    const auto net = build_network(edges);
    const FloydWarshallRef ref(edges, net);
    for (PoiId u = 0; u < net.poi_count(); ++u) {
      for (PoiId v = 0; v < net.poi_count(); ++v) {
        const auto got = shortest_cost(net, u, v);
        const double want = ref(u, v);
        if (std::isinf(want)) {
          CHECK_FALSE(got.has_value());
        } else {
          REQUIRE(got.has_value());
          CHECK(*got == doctest::Approx(want).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("metric properties: symmetry, zero diagonal, triangle inequality") {
  rng::Engine eng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng::uniform_index(eng, 9));
    const auto net = build_network(testutil::random_graph_edges(eng, n, 6));
    const TravelMetrics metrics(net, 0.2);
    for (int s = 0; s < 30; ++s) {
      const auto u = static_cast<PoiId>(
          rng::uniform_index(eng, static_cast<std::uint64_t>(n)));
      const auto v = static_cast<PoiId>(
          rng::uniform_index(eng, static_cast<std::uint64_t>(n)));
      const auto w = static_cast<PoiId>(
          rng::uniform_index(eng, static_cast<std::uint64_t>(n)));
      CHECK(*metrics.cost(u, u) == 0.0);
      // Summation order along the path differs per direction; equality
      // holds to the last few ulps.
      CHECK(*metrics.cost(u, v) ==
            doctest::Approx(*metrics.cost(v, u)).epsilon(1e-12));
      CHECK(*metrics.cost(u, w) <=
            *metrics.cost(u, v) + *metrics.cost(v, w) + 1e-9);
    }
  }
}

TEST_CASE("collapsing duplicate edges never increases any shortest cost") {
  rng::Engine eng(321);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng::uniform_index(eng, 8));
    auto edges = testutil::random_graph_edges(eng, n, 4);
    auto with_dupes = edges;
    const auto base = edges.size();
    for (std::size_t d = 0; d < 3 && d < base; ++d) {
      auto e = edges[d];
      e.w = e.w * (1.0 + rng::uniform_real(eng, 0.0, 2.0));
      with_dupes.push_back(e);
    }
    const auto net = build_network(with_dupes);
    // Reference over the duplicated list, collapse handled by min inside.
    const FloydWarshallRef ref(with_dupes, net);
    for (PoiId u = 0; u < net.poi_count(); ++u) {
      for (PoiId v = 0; v < net.poi_count(); ++v) {
        const auto got = shortest_cost(net, u, v);
        REQUIRE(got.has_value());
        CHECK(*got == doctest::Approx(ref(u, v)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("travel time is exactly time_factor times cost") {
  const auto fx = testutil::cycle4_fixture();
  const auto& net = *fx.net;
  SUBCASE("cost 10 at factor 0.2 gives time 2") {
    const auto net2 = build_network({{1, 2, 10.0}});
    const TravelMetrics m(net2, 0.2);
    CHECK(*m.time(net2.to_id(1), net2.to_id(2)) == doctest::Approx(2.0));
    CHECK(*m.time(net2.to_id(1), net2.to_id(1)) == 0.0);
  }
  SUBCASE("exact multiple of cost everywhere") {
    const TravelMetrics m(net, 0.7);
    for (PoiId u = 0; u < net.poi_count(); ++u) {
      for (PoiId v = 0; v < net.poi_count(); ++v) {
        CHECK(*m.time(u, v) == 0.7 * *m.cost(u, v));
      }
    }
  }
}

TEST_CASE("full-apsp and on-demand modes agree on all pairs") {
  rng::Engine eng(77);
  auto edges = testutil::cycle4_edges();
  for (int trial = 0; trial < 3; ++trial) {
    const auto net = build_network(edges);
    const TravelMetrics full(net, 0.2, TravelMetrics::Mode::FullApsp);
    const TravelMetrics lazy(net, 0.2, TravelMetrics::Mode::OnDemandCached);
    for (PoiId u = 0; u < net.poi_count(); ++u) {
      for (PoiId v = 0; v < net.poi_count(); ++v) {
        CHECK(full.cost(u, v) == lazy.cost(u, v));
      }
    }
    const int n = 5 + static_cast<int>(rng::uniform_index(eng, 8));
    edges = testutil::random_graph_edges(eng, n, 5);
  }
}

TEST_CASE("on-demand cache is safe under concurrent queries") {
  rng::Engine eng(555);
  const auto net = build_network(testutil::random_graph_edges(eng, 40, 20));
  const TravelMetrics metrics(net, 0.2);
  const TravelMetrics full(net, 0.2, TravelMetrics::Mode::FullApsp);
  std::atomic<int> mismatches{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] {
      rng::Engine local(static_cast<std::uint64_t>(t) + 1);
      for (int q = 0; q < 2000; ++q) {
        const auto u = static_cast<PoiId>(rng::uniform_index(local, 40));
        const auto v = static_cast<PoiId>(rng::uniform_index(local, 40));
        if (metrics.cost(u, v) != full.cost(u, v)) {
          mismatches.fetch_add(1);
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  CHECK(mismatches.load() == 0);
}

TEST_CASE("bundled oldenburg stand-in reports 6105 nodes / 7035 edges") {
  const auto net = load_graph(testutil::data_path("oldenburg_synthetic.txt"),
                              GraphFormat::Oldenburg);
  CHECK(net.poi_count() == 6105);
  CHECK(net.edge_count() == 7035);
}

TEST_CASE("graph format names round-trip") {
  for (const auto* name : {"edgelist", "oldenburg", "mtx"}) {
    CHECK(to_string(parse_graph_format(name)) == name);
  }
  CHECK_THROWS_AS(parse_graph_format("dimacs"), Error);
}
