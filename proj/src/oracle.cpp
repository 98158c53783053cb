#include "jobroute/oracle.hpp"

#include <algorithm>
#include <limits>

#include "jobroute/error.hpp"

namespace jobroute {

FeasibilityDag build_feasibility_dag(const ProblemInstance& inst) {
  FeasibilityDag dag;
  dag.order.resize(inst.jobs.size());
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
    dag.order[i] = i;
  }
  std::sort(dag.order.begin(), dag.order.end(),
            [&](std::size_t a, std::size_t b) {
              const Job& ja = inst.jobs[a];
              const Job& jb = inst.jobs[b];
              if (ja.start_time != jb.start_time) {
                return ja.start_time < jb.start_time;
              }
              return ja.id < jb.id;
            });

  const Worker& worker = inst.worker;
  const TravelMetrics& metrics = *inst.metrics;
  const std::size_t k = dag.order.size();
  dag.arcs.assign(k + 1, {});

  auto target_ok = [&](const Job& job) {
    return job.finish_time() <= worker.window_end;
  };

  for (std::size_t bi = 0; bi < k; ++bi) {
    const Job& b = inst.jobs[dag.order[bi]];
    if (!target_ok(b)) {
      continue;
    }
    if (const auto t = metrics.travel(worker.start_poi, b.poi)) {
      if (worker.window_start + t->time <= b.start_time) {
        dag.arcs[0].push_back({bi + 1, t->cost});
      }
    }
    for (std::size_t ai = 0; ai < bi; ++ai) {
      const Job& a = inst.jobs[dag.order[ai]];
      if (const auto t = metrics.travel(a.poi, b.poi)) {
        if (a.finish_time() + t->time <= b.start_time) {
          // Positive durations make arcs strictly forward in start time;
          // anything else would break the topological order below.
          if (!(a.start_time < b.start_time)) {
            throw Error("feasibility graph is not acyclic; job durations "
                        "must be positive");
          }
          dag.arcs[ai + 1].push_back({bi + 1, t->cost});
        }
      }
    }
  }
  return dag;
}

namespace {

struct Label {
  double cost;
  double utility;
  std::size_t pred_node;    // node index in the DAG
  std::size_t pred_label;   // index into labels[pred_node]
};

using LabelSets = std::vector<std::vector<Label>>;

std::vector<JobId> chain_ids(const LabelSets& labels, const FeasibilityDag& dag,
                             const ProblemInstance& inst, std::size_t node,
                             std::size_t label_idx) {
  std::vector<JobId> ids;
  while (node != 0) {
    ids.push_back(inst.jobs[dag.order[node - 1]].id);
    const Label& l = labels[node][label_idx];
    label_idx = l.pred_label;
    node = l.pred_node;
  }
  std::reverse(ids.begin(), ids.end());
  return ids;
}

} // namespace

Schedule exact_optimal(const ProblemInstance& inst, const OracleOptions& opts) {
  if (inst.jobs.size() > opts.max_jobs) {
    throw Error("instance too large for the exact solver: " +
                std::to_string(inst.jobs.size()) + " jobs, limit " +
                std::to_string(opts.max_jobs) +
                " (raise --oracle-max-jobs to override)");
  }
  const FeasibilityDag dag = build_feasibility_dag(inst);
  const std::size_t nodes = dag.arcs.size();

  LabelSets labels(nodes);
  labels[0].push_back({0.0, 0.0, 0, 0});
  std::size_t total_labels = 1;

  auto lex_chain = [&](std::size_t node, std::size_t a, std::size_t b) {
    return chain_ids(labels, dag, inst, node, a) <
           chain_ids(labels, dag, inst, node, b);
  };

  // Insert with dominance pruning; the set stays mutually non-dominating.
  auto insert_label = [&](std::size_t node, Label cand) {
    auto& set = labels[node];
    for (std::size_t i = 0; i < set.size(); ++i) {
      const Label& l = set[i];
      if (l.cost == cand.cost && l.utility == cand.utility) {
        // Exact tie: keep the lexicographically smaller chain. The
        // candidate is appended temporarily so lex_chain can walk it.
        const std::size_t cand_idx = set.size();
        set.push_back(cand);
        const bool cand_wins = lex_chain(node, cand_idx, i);
        if (cand_wins) {
          set[i] = set[cand_idx];
        }
        set.pop_back();
        return;
      }
      if (l.cost <= cand.cost && l.utility >= cand.utility) {
        return;  // dominated
      }
    }
    std::erase_if(set, [&](const Label& l) {
      const bool dominated = cand.cost <= l.cost && cand.utility >= l.utility;
      if (dominated) {
        --total_labels;
      }
      return dominated;
    });
    set.push_back(cand);
    ++total_labels;
    if (total_labels > opts.max_labels) {
      throw Error("label cap exceeded (" + std::to_string(opts.max_labels) +
                  "); raise --oracle-max-labels or shrink the instance");
    }
  };

  for (std::size_t node = 0; node < nodes; ++node) {
    if (opts.check_invariants) {
      const auto& set = labels[node];
      for (std::size_t a = 0; a < set.size(); ++a) {
        for (std::size_t b = 0; b < set.size(); ++b) {
          if (a != b && set[a].cost <= set[b].cost &&
              set[a].utility >= set[b].utility) {
            throw Error("internal: dominated label survived propagation");
          }
        }
      }
    }
    for (std::size_t li = 0; li < labels[node].size(); ++li) {
      for (const auto& arc : dag.arcs[node]) {
        const Label& from = labels[node][li];
        const double cost = from.cost + arc.cost;
        if (cost > inst.worker.budget) {
          continue;
        }
        const Job& target = inst.jobs[dag.order[arc.to - 1]];
        insert_label(arc.to, {cost, from.utility + target.utility, node, li});
      }
    }
  }

  // Best label overall: max utility, then min cost, then lex smallest chain.
  std::size_t best_node = 0;
  std::size_t best_label = 0;
  for (std::size_t node = 0; node < nodes; ++node) {
    for (std::size_t li = 0; li < labels[node].size(); ++li) {
      const Label& l = labels[node][li];
      const Label& b = labels[best_node][best_label];
      if (l.utility > b.utility ||
          (l.utility == b.utility &&
           (l.cost < b.cost ||
            (l.cost == b.cost &&
             chain_ids(labels, dag, inst, node, li) <
                 chain_ids(labels, dag, inst, best_node, best_label))))) {
        best_node = node;
        best_label = li;
      }
    }
  }
  return replay_sequence(inst, chain_ids(labels, dag, inst, best_node,
                                         best_label));
}

namespace {

struct EnumState {
  const ProblemInstance& inst;
  std::vector<std::size_t> sorted;      // job indices by (start, id)
  std::vector<bool> used;
  std::vector<JobId> current;
  std::vector<JobId> best;
  double best_utility = 0.0;

  explicit EnumState(const ProblemInstance& in) : inst(in) {
    sorted.resize(inst.jobs.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      sorted[i] = i;
    }
    std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
      const Job& ja = inst.jobs[a];
      const Job& jb = inst.jobs[b];
      if (ja.start_time != jb.start_time) {
        return ja.start_time < jb.start_time;
      }
      return ja.id < jb.id;
    });
    used.assign(sorted.size(), false);
  }

  void offer(double utility) {
    if (utility > best_utility ||
        (utility == best_utility && !best.empty() && current < best)) {
      best_utility = utility;
      best = current;
    }
  }

  // Checks deliberately inlined rather than shared with the selectors or
  // the DAG: this is the independent reference path.
  void dfs(PoiId poi, double clock, double budget, double utility) {
    offer(utility);
    for (std::size_t s = 0; s < sorted.size(); ++s) {
      if (used[s]) {
        continue;
      }
      const Job& job = inst.jobs[sorted[s]];
      const auto travel = inst.metrics->travel(poi, job.poi);
      if (!travel) {
        continue;
      }
      if (clock + travel->time > job.start_time ||
          travel->cost > budget ||
          job.finish_time() > inst.worker.window_end) {
        continue;
      }
      used[s] = true;
      current.push_back(job.id);
      dfs(job.poi, job.finish_time(), budget - travel->cost,
          utility + job.utility);
      current.pop_back();
      used[s] = false;
    }
  }
};

} // namespace

Schedule enumerate_optimal(const ProblemInstance& inst) {
  if (inst.jobs.size() > 12) {
    throw Error("enumerate_optimal handles at most 12 jobs, got " +
                std::to_string(inst.jobs.size()));
  }
  EnumState st(inst);
  st.dfs(inst.worker.start_poi, inst.worker.window_start, inst.worker.budget,
         0.0);
  return replay_sequence(inst, st.best);
}

} // namespace jobroute
