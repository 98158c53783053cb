#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jobroute/instance.hpp"
#include "jobroute/schedule.hpp"

namespace jobroute {

struct SelectionState {
  PoiId current_poi;
  double clock;
  double budget_left;
};

// True iff `job` can be the next commitment from `state`: its POI is
// reachable, the worker arrives on or before the start time, the travel cost
// fits the remaining budget and the job finishes inside the working window.
// All comparisons are inclusive boundaries.
bool feasible_next(const SelectionState& state, const Job& job,
                   const Worker& worker, const TravelMetrics& metrics);

// One selectable job as seen from the worker's current POI. The pick rules
// below are the single source of truth for tie-breaking and are exposed so
// they can be tested on hand-built candidate sets.
struct Candidate {
  JobId id;
  double utility;
  double cost;      // travel cost from the current POI
  double time;      // travel time from the current POI
  double duration;
};

// (utility - cost) / (time + duration); negative when cost exceeds utility.
double priority_value(const Candidate& c);

// Priority of `job` from `current`. Requires a reachable POI.
double priority(const TravelMetrics& metrics, PoiId current, const Job& job);

// Keeps candidates with utility > cost, maximizes utility - cost,
// breaks ties by ascending job id. nullopt when no candidate qualifies.
std::optional<std::size_t> pick_best_first(std::span<const Candidate> cs);

// Maximizes priority_value; ties by lower travel cost, then ascending id.
std::optional<std::size_t> pick_highest_priority(std::span<const Candidate> cs);

struct BestFirstOptions {
  // Restrict each round's candidate pool to the run of equal start times
  // following the last committed job instead of all remaining jobs.
  bool strict_batch = false;
};

struct NearestNeighborOptions {
  // Allow committing candidates whose priority is negative (net-loss moves).
  bool allow_negative = false;
};

Schedule select_best_first(const ProblemInstance& inst,
                           const BestFirstOptions& opts = {});
Schedule select_nearest_neighbor(const ProblemInstance& inst,
                                 const NearestNeighborOptions& opts = {});
Schedule select_random(const ProblemInstance& inst, std::uint64_t seed);
Schedule select_utility_greedy(const ProblemInstance& inst);

// Rebuilds a schedule from a job order, recomputing travel and waiting.
// Throws Error if the order is not feasible.
Schedule replay_sequence(const ProblemInstance& inst,
                         const std::vector<JobId>& order);

struct Violation {
  std::string category;   // temporal, budget, window, duplicate-job, ...
  std::string message;
};

// Recomputes every leg from the instance and metrics without trusting the
// schedule's cached numbers. Empty result means the schedule is valid.
std::vector<Violation> validate_schedule(const ProblemInstance& inst,
                                         const Schedule& s);

} // namespace jobroute
