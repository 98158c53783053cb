#include <doctest.h>

#include <cmath>

#include "jobroute/error.hpp"
#include "jobroute/instance.hpp"
#include "jobroute/rng.hpp"
#include "testutil.hpp"

using namespace jobroute;

namespace {

bool jobs_equal(const Job& a, const Job& b) {
  return a.id == b.id && a.poi == b.poi && a.utility == b.utility &&
         a.start_time == b.start_time && a.duration == b.duration;
}

} // namespace

TEST_CASE("generation is a pure function of (seed, params, net)") {
  const auto fx = testutil::cycle4_fixture();
  const auto a = generate_instance(*fx.net, *fx.metrics, 200, {}, 7);
  const auto b = generate_instance(*fx.net, *fx.metrics, 200, {}, 7);
  CHECK(instance_to_string(a) == instance_to_string(b));
  const auto c = generate_instance(*fx.net, *fx.metrics, 200, {}, 8);
  CHECK(instance_to_string(a) != instance_to_string(c));
}

TEST_CASE("generated values respect the declared ranges") {
  const auto fx = testutil::cycle4_fixture();
  const auto inst = generate_instance(*fx.net, *fx.metrics, 200, {}, 42);
  for (const auto& job : inst.jobs) {
    CHECK(job.utility >= 9000.0);
    CHECK(job.utility <= 12000.0);
    CHECK(job.start_time >= 1.0);
    CHECK(job.start_time <= 5000.0);
    CHECK(job.duration >= 10.0);
    CHECK(job.duration <= 200.0);
  }
}

TEST_CASE("degenerate duration range pins the finish time") {
  const auto fx = testutil::cycle4_fixture();
  GenParams params;
  params.duration_range = {50.0, 50.0};
  const auto inst = generate_instance(*fx.net, *fx.metrics, 1, params, 3);
  REQUIRE(inst.jobs.size() == 1);
  CHECK(inst.jobs[0].duration == 50.0);
  CHECK(inst.jobs[0].finish_time() == inst.jobs[0].start_time + 50.0);
}

TEST_CASE("generation rejects bad parameters") {
  const auto fx = testutil::cycle4_fixture();
  CHECK_THROWS_AS(generate_instance(*fx.net, *fx.metrics, 0, {}, 1), Error);
  GenParams empty;
  empty.util_range = {10.0, 5.0};
  CHECK_THROWS_AS(generate_instance(*fx.net, *fx.metrics, 5, empty, 1), Error);
}

TEST_CASE("worker defaults: budget scales with the graph, overrides stick") {
  const auto fx = testutil::cycle4_fixture();
  const auto inst = generate_instance(*fx.net, *fx.metrics, 5, {}, 11);
  // mean edge weight of the cycle fixture is (1+1+5+1)/4 = 2.
  CHECK(inst.worker.budget == doctest::Approx(200.0));
  CHECK(inst.worker.window_start == 1.0);
  CHECK(inst.worker.window_end == 5000.0);

  GenParams params;
  params.budget = 42.0;
  params.worker_start = 3;
  params.window_start = 5.0;
  params.window_end = 105.0;
  const auto inst2 = generate_instance(*fx.net, *fx.metrics, 5, params, 11);
  CHECK(inst2.worker.budget == 42.0);
  CHECK(fx.net->label(inst2.worker.start_poi) == 3);
  CHECK(inst2.worker.window_start == 5.0);
  // Overriding the worker start must not reshuffle the job draws.
  REQUIRE(inst.jobs.size() == inst2.jobs.size());
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    CHECK(inst.jobs[i].poi == inst2.jobs[i].poi);
    CHECK(inst.jobs[i].start_time == inst2.jobs[i].start_time);
  }
}

TEST_CASE("invariants hold across 1000 seeds") {
  const auto fx = testutil::cycle4_fixture();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto inst = generate_instance(*fx.net, *fx.metrics, 5, {}, seed);
    for (const auto& job : inst.jobs) {
      CHECK(job.duration > 0.0);
      CHECK(job.utility > 0.0);
      CHECK(job.finish_time() > job.start_time);
      CHECK(job.poi >= 0);
      CHECK(job.poi < fx.net->poi_count());
    }
    CHECK(inst.worker.budget >= 0.0);
    CHECK(inst.worker.window_end > inst.worker.window_start);
  }
}

TEST_CASE("distribution sanity over 10000 jobs") {
  const auto fx = testutil::cycle4_fixture();
  const auto inst = generate_instance(*fx.net, *fx.metrics, 10000, {}, 2024);
  double lo = 1e18;
  double hi = -1e18;
  double sum = 0.0;
  for (const auto& job : inst.jobs) {
    lo = std::min(lo, job.utility);
    hi = std::max(hi, job.utility);
    sum += job.utility;
  }
  CHECK(lo >= 9000.0);
  CHECK(hi <= 12000.0);
  const double mean = sum / 10000.0;
  CHECK(std::abs(mean - 10500.0) / 10500.0 < 0.02);
}

TEST_CASE("save/load round-trip preserves every field") {
  const auto fx = testutil::cycle4_fixture();
  const auto inst =
      generate_instance(*fx.net, *fx.metrics, 200, {}, 7, "some/graph.txt",
                        GraphFormat::EdgeList);
  const auto text = instance_to_string(inst);
  const auto back = instance_from_string(text, *fx.net, *fx.metrics);
  CHECK(back.seed == inst.seed);
  CHECK(back.dataset == inst.dataset);
  CHECK(back.worker.start_poi == inst.worker.start_poi);
  CHECK(back.worker.window_start == inst.worker.window_start);
  CHECK(back.worker.window_end == inst.worker.window_end);
  CHECK(back.worker.budget == inst.worker.budget);
  REQUIRE(back.jobs.size() == inst.jobs.size());
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    CHECK(jobs_equal(back.jobs[i], inst.jobs[i]));
  }
  // Re-saving what was loaded reproduces the bytes.
  CHECK(instance_to_string(back) == text);
}

TEST_CASE("instance files with broken invariants are rejected") {
  const auto fx = testutil::cycle4_fixture();
  const std::string header =
      "jobroute-instance v1\ndataset x\nformat edgelist\ntime_factor 0.2\n"
      "seed 1\nt_range 1 5000\nutil_range 9000 12000\nduration_range 10 200\n"
      "worker 1 1 5000 100\n";

  SUBCASE("non-positive duration names the job") {
    const auto text = header + "jobs 1\njob 17 2 9500 10 0\nend\n";
    CHECK_THROWS_WITH_AS(instance_from_string(text, *fx.net, *fx.metrics),
                         doctest::Contains("job 17"), Error);
  }
  SUBCASE("job at a POI outside the network") {
    const auto text = header + "jobs 1\njob 1 99999 9500 10 5\nend\n";
    CHECK_THROWS_WITH_AS(instance_from_string(text, *fx.net, *fx.metrics),
                         doctest::Contains("99999"), Error);
  }
  SUBCASE("duplicate job ids") {
    const auto text =
        header + "jobs 2\njob 1 2 9500 10 5\njob 1 3 9500 20 5\nend\n";
    CHECK_THROWS_WITH_AS(instance_from_string(text, *fx.net, *fx.metrics),
                         doctest::Contains("duplicate job id"), Error);
  }
  SUBCASE("job count mismatch") {
    const auto text = header + "jobs 2\njob 1 2 9500 10 5\nend\n";
    CHECK_THROWS_AS(instance_from_string(text, *fx.net, *fx.metrics), Error);
  }
  SUBCASE("missing end marker") {
    const auto text = header + "jobs 1\njob 1 2 9500 10 5\n";
    CHECK_THROWS_AS(instance_from_string(text, *fx.net, *fx.metrics), Error);
  }
}

TEST_CASE("peek rejects instances that do not name their dataset") {
  const auto path = testutil::write_temp(
      "jr_nodataset.inst",
      "jobroute-instance v1\nformat edgelist\nworker 1 1 5000 100\n"
      "jobs 0\nend\n");
  CHECK_THROWS_WITH_AS(peek_instance_file(path),
                       doctest::Contains("--graph"), Error);
}

TEST_CASE("peek reads the graph reference from the header") {
  const auto fx = testutil::cycle4_fixture();
  const auto inst = generate_instance(*fx.net, *fx.metrics, 3, {}, 5,
                                      "data/erd_synthetic.mtx",
                                      GraphFormat::MatrixMarket);
  const auto path = testutil::write_temp("jr_peek.inst",
                                         instance_to_string(inst));
  const auto info = peek_instance_file(path);
  CHECK(info.dataset == "data/erd_synthetic.mtx");
  CHECK(info.format == GraphFormat::MatrixMarket);
  CHECK(info.time_factor == 0.2);
}
