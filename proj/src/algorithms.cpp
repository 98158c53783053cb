#include "jobroute/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "jobroute/error.hpp"
#include "jobroute/rng.hpp"
#include "text_util.hpp"

namespace jobroute {

namespace {

// Tolerance for the validator's recomputation checks. Selection itself uses
// exact comparisons; the slack only absorbs differing summation orders.
constexpr double kValidateTol = 1e-9;

struct Runner {
  const ProblemInstance& inst;
  SelectionState state;
  Schedule schedule;

  explicit Runner(const ProblemInstance& in)
      : inst(in), state{in.worker.start_poi, in.worker.window_start,
                        in.worker.budget} {}

  bool feasible(const Job& job) const {
    return feasible_next(state, job, inst.worker, *inst.metrics);
  }

  // Commit a job known to be feasible from the current state.
  void commit(const Job& job) {
    const auto t = inst.metrics->travel(state.current_poi, job.poi);
    ScheduleLeg leg;
    leg.job_id = job.id;
    leg.from_poi = state.current_poi;
    leg.travel_cost = t->cost;
    leg.travel_time = t->time;
    leg.arrival_time = state.clock + t->time;
    leg.job_start = job.start_time;
    leg.job_finish = job.finish_time();
    schedule.legs.push_back(leg);
    schedule.total_utility += job.utility;
    schedule.total_travel_cost += t->cost;
    schedule.jobs_performed += 1;
    state.current_poi = job.poi;
    state.clock = job.finish_time();
    state.budget_left -= t->cost;
  }
};

Candidate make_candidate(const Job& job, const Travel& t) {
  return Candidate{job.id, job.utility, t.cost, t.time, job.duration};
}

} // namespace

bool feasible_next(const SelectionState& state, const Job& job,
                   const Worker& worker, const TravelMetrics& metrics) {
  const auto t = metrics.travel(state.current_poi, job.poi);
  if (!t) {
    return false;
  }
  return state.clock + t->time <= job.start_time &&
         t->cost <= state.budget_left &&
         job.finish_time() <= worker.window_end;
}

double priority_value(const Candidate& c) {
  return (c.utility - c.cost) / (c.time + c.duration);
}

double priority(const TravelMetrics& metrics, PoiId current, const Job& job) {
  const auto t = metrics.travel(current, job.poi);
  if (!t) {
    throw Error("priority undefined: POI of job " + std::to_string(job.id) +
                " is unreachable from the current POI");
  }
  return priority_value(make_candidate(job, *t));
}

std::optional<std::size_t> pick_best_first(std::span<const Candidate> cs) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!(cs[i].utility > cs[i].cost)) {
      continue;
    }
    if (!best) {
      best = i;
      continue;
    }
    const double net_i = cs[i].utility - cs[i].cost;
    const double net_b = cs[*best].utility - cs[*best].cost;
    if (net_i > net_b || (net_i == net_b && cs[i].id < cs[*best].id)) {
      best = i;
    }
  }
  return best;
}

std::optional<std::size_t> pick_highest_priority(std::span<const Candidate> cs) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!best) {
      best = i;
      continue;
    }
    const double p_i = priority_value(cs[i]);
    const double p_b = priority_value(cs[*best]);
    if (p_i > p_b ||
        (p_i == p_b && (cs[i].cost < cs[*best].cost ||
                        (cs[i].cost == cs[*best].cost &&
                         cs[i].id < cs[*best].id)))) {
      best = i;
    }
  }
  return best;
}

Schedule select_best_first(const ProblemInstance& inst,
                           const BestFirstOptions& opts) {
  Runner run(inst);

  // Jobs starting before the window never qualify; sort the rest by
  // (start time, utility desc, id) which is also the first-pick order.
  std::vector<std::size_t> order;
  order.reserve(inst.jobs.size());
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    if (inst.jobs[i].start_time >= inst.worker.window_start) {
      order.push_back(i);
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Job& ja = inst.jobs[a];
    const Job& jb = inst.jobs[b];
    if (ja.start_time != jb.start_time) {
      return ja.start_time < jb.start_time;
    }
    if (ja.utility != jb.utility) {
      return ja.utility > jb.utility;
    }
    return ja.id < jb.id;
  });

  // First job: earliest-starting feasible one.
  std::size_t first_pos = order.size();
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (run.feasible(inst.jobs[order[pos]])) {
      first_pos = pos;
      break;
    }
  }
  if (first_pos == order.size()) {
    return run.schedule;
  }
  run.commit(inst.jobs[order[first_pos]]);

  if (!opts.strict_batch) {
    std::vector<bool> committed(order.size(), false);
    committed[first_pos] = true;
    for (;;) {
      std::vector<Candidate> candidates;
      std::vector<std::size_t> positions;
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (committed[pos]) {
          continue;
        }
        const Job& job = inst.jobs[order[pos]];
        if (!run.feasible(job)) {
          continue;
        }
        candidates.push_back(make_candidate(
            job, *inst.metrics->travel(run.state.current_poi, job.poi)));
        positions.push_back(pos);
      }
      const auto pick = pick_best_first(candidates);
      if (!pick) {
        break;
      }
      committed[positions[*pick]] = true;
      run.commit(inst.jobs[order[positions[*pick]]]);
    }
    return run.schedule;
  }

  // Strict batch variant: each round only considers the run of equal start
  // times right after the last inspected position in the sorted list.
  std::size_t anchor = first_pos;
  while (anchor + 1 < order.size()) {
    const std::size_t batch_begin = anchor + 1;
    std::size_t batch_end = batch_begin + 1;
    while (batch_end < order.size() &&
           inst.jobs[order[batch_end]].start_time ==
               inst.jobs[order[batch_begin]].start_time) {
      ++batch_end;
    }
    std::vector<Candidate> candidates;
    std::vector<std::size_t> positions;
    for (std::size_t pos = batch_begin; pos < batch_end; ++pos) {
      const Job& job = inst.jobs[order[pos]];
      if (!run.feasible(job)) {
        continue;
      }
      candidates.push_back(make_candidate(
          job, *inst.metrics->travel(run.state.current_poi, job.poi)));
      positions.push_back(pos);
    }
    if (const auto pick = pick_best_first(candidates)) {
      run.commit(inst.jobs[order[positions[*pick]]]);
    }
    // Jobs sharing a start time exclude each other once one is committed,
    // so the next batch always begins after this one.
    anchor = batch_end - 1;
  }
  return run.schedule;
}

Schedule select_nearest_neighbor(const ProblemInstance& inst,
                                 const NearestNeighborOptions& opts) {
  Runner run(inst);
  std::vector<std::size_t> pool;
  pool.reserve(inst.jobs.size());
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    pool.push_back(i);
  }

  // Priorities depend only on the worker's position, which changes only on
  // a commit. Each round ranks the remaining reachable jobs once and pops
  // them best-first off a heap: every popped candidate is exactly the
  // current maximum, so discarding failures while popping matches
  // re-picking after each removal. Jobs whose start time has passed can
  // never become feasible again (the clock only advances) and are pruned
  // during the scan.
  struct Ranked {
    double priority;
    double cost;
    JobId id;
    std::size_t pool_pos;
  };
  const auto heap_less = [](const Ranked& a, const Ranked& b) {
    if (a.priority != b.priority) {
      return a.priority < b.priority;
    }
    if (a.cost != b.cost) {
      return a.cost > b.cost;
    }
    return a.id > b.id;
  };

  while (!pool.empty()) {
    std::vector<Ranked> heap;
    heap.reserve(pool.size());
    std::vector<bool> drop(pool.size(), false);
    for (std::size_t p = 0; p < pool.size(); ++p) {
      const Job& job = inst.jobs[pool[p]];
      if (job.start_time < run.state.clock) {
        drop[p] = true;  // expired
        continue;
      }
      const auto t = inst.metrics->travel(run.state.current_poi, job.poi);
      if (!t) {
        continue;  // different component, never selectable from here
      }
      heap.push_back({priority_value(make_candidate(job, *t)), t->cost,
                      job.id, p});
    }
    std::make_heap(heap.begin(), heap.end(), heap_less);

    bool committed = false;
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), heap_less);
      const Ranked top = heap.back();
      heap.pop_back();
      if (!opts.allow_negative && top.priority < 0.0) {
        // The best remaining move loses money and the position cannot
        // change again, so no later round could do better. Stop.
        break;
      }
      const Job& job = inst.jobs[pool[top.pool_pos]];
      drop[top.pool_pos] = true;
      if (run.feasible(job)) {
        run.commit(job);
        committed = true;
        break;
      }
    }

    std::size_t write = 0;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (!drop[p]) {
        pool[write++] = pool[p];
      }
    }
    pool.resize(write);
    if (!committed) {
      break;
    }
  }
  return run.schedule;
}

Schedule select_random(const ProblemInstance& inst, std::uint64_t seed) {
  Runner run(inst);
  std::vector<std::size_t> pool;
  pool.reserve(inst.jobs.size());
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    pool.push_back(i);
  }
  rng::Engine eng(seed);
  while (!pool.empty()) {
    const auto pos = static_cast<std::size_t>(
        rng::uniform_index(eng, pool.size()));
    const Job& job = inst.jobs[pool[pos]];
    if (run.feasible(job)) {
      run.commit(job);
    }
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return run.schedule;
}

Schedule select_utility_greedy(const ProblemInstance& inst) {
  Runner run(inst);
  std::vector<std::size_t> pool;
  pool.reserve(inst.jobs.size());
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    pool.push_back(i);
  }

  while (!pool.empty()) {
    // Max utility; ties by lower travel cost (unreachable sorts last),
    // then ascending id.
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    if (const auto t =
            inst.metrics->cost(run.state.current_poi, inst.jobs[pool[0]].poi)) {
      best_cost = *t;
    }
    for (std::size_t p = 1; p < pool.size(); ++p) {
      const Job& job = inst.jobs[pool[p]];
      const Job& cur = inst.jobs[pool[best]];
      double cost = std::numeric_limits<double>::infinity();
      if (const auto t = inst.metrics->cost(run.state.current_poi, job.poi)) {
        cost = *t;
      }
      if (job.utility > cur.utility ||
          (job.utility == cur.utility &&
           (cost < best_cost ||
            (cost == best_cost && job.id < cur.id)))) {
        best = p;
        best_cost = cost;
      }
    }
    const Job& job = inst.jobs[pool[best]];
    if (run.feasible(job)) {
      run.commit(job);
    }
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return run.schedule;
}

Schedule replay_sequence(const ProblemInstance& inst,
                         const std::vector<JobId>& order) {
  std::unordered_map<JobId, const Job*> by_id;
  for (const auto& job : inst.jobs) {
    by_id.emplace(job.id, &job);
  }
  Runner run(inst);
  for (JobId id : order) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error("replay: unknown job id " + std::to_string(id));
    }
    if (!run.feasible(*it->second)) {
      throw Error("replay: job " + std::to_string(id) +
                  " is not feasible at its position in the sequence");
    }
    run.commit(*it->second);
  }
  return run.schedule;
}

std::vector<Violation> validate_schedule(const ProblemInstance& inst,
                                         const Schedule& s) {
  std::vector<Violation> out;
  auto add = [&](const std::string& category, const std::string& message) {
    out.push_back({category, message});
  };
  auto job_tag = [](JobId id) { return "job " + std::to_string(id); };

  std::unordered_map<JobId, const Job*> by_id;
  for (const auto& job : inst.jobs) {
    by_id.emplace(job.id, &job);
  }

  const Worker& worker = inst.worker;
  std::unordered_set<JobId> seen;
  PoiId expected_from = worker.start_poi;
  double clock = worker.window_start;
  double cost_sum = 0.0;
  double utility_sum = 0.0;
  JobId prev_id = -1;

  for (std::size_t i = 0; i < s.legs.size(); ++i) {
    const ScheduleLeg& leg = s.legs[i];
    auto it = by_id.find(leg.job_id);
    if (it == by_id.end()) {
      add("unknown-job", job_tag(leg.job_id) + " is not in the instance");
      return out;  // later checks would chase a phantom job
    }
    const Job& job = *it->second;
    if (!seen.insert(leg.job_id).second) {
      add("duplicate-job", job_tag(leg.job_id) + " appears more than once");
    }
    if (leg.from_poi != expected_from) {
      add("accounting",
          job_tag(leg.job_id) + ": leg departs from POI " +
              std::to_string(inst.network->label(leg.from_poi)) +
              " but the worker is at " +
              std::to_string(inst.network->label(expected_from)));
    }

    const auto t = inst.metrics->travel(expected_from, job.poi);
    if (!t) {
      add("unreachable", job_tag(leg.job_id) + ": POI unreachable from " +
                             std::to_string(inst.network->label(expected_from)));
      return out;
    }
    if (std::abs(leg.travel_cost - t->cost) > kValidateTol) {
      add("accounting", job_tag(leg.job_id) + ": recorded travel cost " +
                            text::format_double(leg.travel_cost) +
                            " differs from recomputed " +
                            text::format_double(t->cost));
    }
    if (std::abs(leg.travel_time - t->time) > kValidateTol) {
      add("accounting", job_tag(leg.job_id) + ": recorded travel time " +
                            text::format_double(leg.travel_time) +
                            " differs from recomputed " +
                            text::format_double(t->time));
    }

    const double arrival = clock + t->time;
    if (std::abs(leg.arrival_time - arrival) > kValidateTol) {
      add("accounting", job_tag(leg.job_id) + ": recorded arrival " +
                            text::format_double(leg.arrival_time) +
                            " differs from recomputed " +
                            text::format_double(arrival));
    }
    if (arrival > job.start_time + kValidateTol) {
      std::ostringstream msg;
      msg << job_tag(leg.job_id) << " starts at "
          << text::format_double(job.start_time) << " but the worker ";
      if (i == 0) {
        msg << "leaves the start POI at "
            << text::format_double(worker.window_start);
      } else {
        msg << "finishes " << job_tag(prev_id) << " at "
            << text::format_double(clock);
      }
      msg << " and arrives at " << text::format_double(arrival);
      add("temporal", msg.str());
    }
    if (std::abs(leg.job_start - job.start_time) > kValidateTol) {
      add("start-time", job_tag(leg.job_id) + " recorded start " +
                            text::format_double(leg.job_start) +
                            " differs from the published start time " +
                            text::format_double(job.start_time));
    }
    if (std::abs(leg.job_finish - job.finish_time()) > kValidateTol) {
      add("accounting", job_tag(leg.job_id) + ": recorded finish " +
                            text::format_double(leg.job_finish) +
                            " differs from start + duration = " +
                            text::format_double(job.finish_time()));
    }
    if (job.finish_time() > worker.window_end + kValidateTol) {
      add("window", job_tag(leg.job_id) + " finishes at " +
                        text::format_double(job.finish_time()) +
                        " after the window end " +
                        text::format_double(worker.window_end));
    }

    cost_sum += t->cost;
    utility_sum += job.utility;
    clock = job.finish_time();
    expected_from = job.poi;
    prev_id = leg.job_id;
  }

  if (cost_sum > worker.budget + kValidateTol) {
    add("budget", "total travel cost " + text::format_double(cost_sum) +
                      " exceeds the budget " +
                      text::format_double(worker.budget));
  }
  if (std::abs(s.total_travel_cost - cost_sum) > kValidateTol) {
    add("accounting", "recorded total travel cost " +
                          text::format_double(s.total_travel_cost) +
                          " differs from recomputed " +
                          text::format_double(cost_sum));
  }
  if (std::abs(s.total_utility - utility_sum) > kValidateTol) {
    add("utility-total", "recorded total utility " +
                             text::format_double(s.total_utility) +
                             " differs from the member sum " +
                             text::format_double(utility_sum));
  }
  if (s.jobs_performed != s.legs.size()) {
    add("accounting", "jobs_performed " + std::to_string(s.jobs_performed) +
                          " differs from the leg count " +
                          std::to_string(s.legs.size()));
  }
  return out;
}

} // namespace jobroute
