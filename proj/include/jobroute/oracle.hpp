#pragma once

#include <cstddef>
#include <vector>

#include "jobroute/algorithms.hpp"
#include "jobroute/instance.hpp"
#include "jobroute/schedule.hpp"

namespace jobroute {

// Jobs ordered by (start_time, id) plus a virtual source node (the worker's
// start POI at the window start). An arc a -> b exists iff the worker can
// finish a, travel, and still arrive at b on time, with b finishing inside
// the window. Positive durations force arcs strictly forward in start-time
// order, so the graph is acyclic and the node order is topological.
struct FeasibilityDag {
  struct Arc {
    std::size_t to;    // node index: 0 = source, i >= 1 = jobs[order[i-1]]
    double cost;
  };

  std::vector<std::size_t> order;        // job indices sorted by (start, id)
  std::vector<std::vector<Arc>> arcs;    // arcs[node], node 0 is the source
};

FeasibilityDag build_feasibility_dag(const ProblemInstance& inst);

struct OracleOptions {
  std::size_t max_jobs = 30;      // refuse larger instances
  std::size_t max_labels = 2000;  // abort instead of truncating silently
  bool check_invariants = false;  // re-verify Pareto sets while propagating
};

// Maximum-utility feasible schedule, exact. Pareto label propagation over
// the feasibility DAG: a label is (cost spent, utility earned) at a job;
// within a node dominated labels are pruned, labels over budget are cut.
// Handles real-valued budgets without discretization.
Schedule exact_optimal(const ProblemInstance& inst,
                       const OracleOptions& opts = {});

// Brute-force reference: exhaustive DFS over feasible job sequences.
// Independent of the DAG code above. Hard guard: at most 12 jobs.
Schedule enumerate_optimal(const ProblemInstance& inst);

} // namespace jobroute
