#include "jobroute/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "jobroute/error.hpp"
#include "jobroute/rng.hpp"
#include "text_util.hpp"

namespace jobroute {

namespace {

void check_range(const std::pair<double, double>& r, const char* name,
                 bool require_positive_low) {
  if (!(r.first <= r.second)) {
    throw Error(std::string(name) + " range is empty: [" +
                text::format_double(r.first) + ", " +
                text::format_double(r.second) + "]");
  }
  if (require_positive_low && !(r.first > 0.0)) {
    throw Error(std::string(name) + " range must be strictly positive");
  }
}

void check_job(const Job& job, const RoadNetwork& net) {
  const std::string tag = "job " + std::to_string(job.id);
  if (!(job.duration > 0.0)) {
    throw Error(tag + ": duration must be positive, got " +
                text::format_double(job.duration));
  }
  if (!(job.utility > 0.0)) {
    throw Error(tag + ": utility must be positive, got " +
                text::format_double(job.utility));
  }
  if (job.poi < 0 || job.poi >= net.poi_count()) {
    throw Error(tag + ": POI out of range");
  }
}

void check_worker(const Worker& worker, const RoadNetwork& net) {
  if (!(worker.window_end > worker.window_start)) {
    throw Error("worker window must end after it starts");
  }
  if (!(worker.budget >= 0.0)) {
    throw Error("worker budget must be nonnegative");
  }
  if (worker.start_poi < 0 || worker.start_poi >= net.poi_count()) {
    throw Error("worker start POI out of range");
  }
}

} // namespace

ProblemInstance generate_instance(const RoadNetwork& net,
                                  const TravelMetrics& metrics, int k,
                                  const GenParams& params, std::uint64_t seed,
                                  const std::string& dataset,
                                  GraphFormat format) {
  if (k <= 0) {
    throw Error("job count must be positive, got " + std::to_string(k));
  }
  check_range(params.t_range, "start-time", false);
  check_range(params.util_range, "utility", true);
  check_range(params.duration_range, "duration", true);
  if (!(params.window_end > params.window_start)) {
    throw Error("worker window must end after it starts");
  }

  ProblemInstance inst;
  inst.network = &net;
  inst.metrics = &metrics;
  inst.seed = seed;
  inst.params = params;
  inst.dataset = dataset;
  inst.format = format;

  // Draw order is part of the replay contract: worker start first (even
  // when overridden the draw is consumed, so overriding the start POI does
  // not reshuffle the jobs), then per job: poi, start, utility, duration.
  rng::Engine eng(seed);
  const auto n = static_cast<std::uint64_t>(net.poi_count());
  const PoiId drawn_start = static_cast<PoiId>(rng::uniform_index(eng, n));
  inst.worker.start_poi =
      params.worker_start ? net.to_id(*params.worker_start) : drawn_start;
  inst.worker.window_start = params.window_start;
  inst.worker.window_end = params.window_end;
  inst.worker.budget =
      params.budget ? *params.budget : 100.0 * net.mean_edge_weight();

  inst.jobs.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Job job;
    job.id = i + 1;
    job.poi = static_cast<PoiId>(rng::uniform_index(eng, n));
    job.start_time =
        rng::uniform_real(eng, params.t_range.first, params.t_range.second);
    job.utility =
        rng::uniform_real(eng, params.util_range.first, params.util_range.second);
    job.duration = rng::uniform_real(eng, params.duration_range.first,
                                     params.duration_range.second);
    check_job(job, net);
    inst.jobs.push_back(job);
  }
  check_worker(inst.worker, net);
  return inst;
}

std::string instance_to_string(const ProblemInstance& inst) {
  const RoadNetwork& net = *inst.network;
  std::ostringstream out;
  out << "jobroute-instance v1\n";
  out << "dataset " << inst.dataset << "\n";
  out << "format " << to_string(inst.format) << "\n";
  out << "time_factor " << text::format_double(inst.metrics->time_factor())
      << "\n";
  out << "seed " << inst.seed << "\n";
  out << "t_range " << text::format_double(inst.params.t_range.first) << " "
      << text::format_double(inst.params.t_range.second) << "\n";
  out << "util_range " << text::format_double(inst.params.util_range.first)
      << " " << text::format_double(inst.params.util_range.second) << "\n";
  out << "duration_range "
      << text::format_double(inst.params.duration_range.first) << " "
      << text::format_double(inst.params.duration_range.second) << "\n";
  out << "worker " << net.label(inst.worker.start_poi) << " "
      << text::format_double(inst.worker.window_start) << " "
      << text::format_double(inst.worker.window_end) << " "
      << text::format_double(inst.worker.budget) << "\n";
  out << "jobs " << inst.jobs.size() << "\n";
  for (const auto& job : inst.jobs) {
    out << "job " << job.id << " " << net.label(job.poi) << " "
        << text::format_double(job.utility) << " "
        << text::format_double(job.start_time) << " "
        << text::format_double(job.duration) << "\n";
  }
  out << "end\n";
  return out.str();
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  text::write_file(path, instance_to_string(inst));
}

namespace {

struct InstanceParser {
  const std::string& text;
  std::size_t pos = 0;
  std::size_t lineno = 0;

  explicit InstanceParser(const std::string& t) : text(t) {}

  // Returns the next non-blank, non-comment line, or nullopt at EOF.
  std::optional<std::string_view> next_line() {
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) {
        eol = text.size();
      }
      auto line = std::string_view(text).substr(pos, eol - pos);
      const bool at_end = eol == text.size();
      pos = eol + 1;
      ++lineno;
      bool blank = true;
      for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') {
          blank = c == '#';
          break;
        }
      }
      if (!blank) {
        return line;
      }
      if (at_end) {
        break;
      }
    }
    return std::nullopt;
  }
};

} // namespace

ProblemInstance instance_from_string(const std::string& content,
                                     const RoadNetwork& net,
                                     const TravelMetrics& metrics) {
  InstanceParser parser(content);
  auto first = parser.next_line();
  if (!first || text::split_ws(*first) !=
                    std::vector<std::string_view>{"jobroute-instance", "v1"}) {
    throw Error("instance file: missing 'jobroute-instance v1' header");
  }

  ProblemInstance inst;
  inst.network = &net;
  inst.metrics = &metrics;

  bool have_worker = false;
  std::optional<std::size_t> job_count;
  bool done = false;

  while (auto line = parser.next_line()) {
    auto tok = text::split_ws(*line);
    const std::string ctx = "instance line " + std::to_string(parser.lineno);
    const auto& key = tok[0];
    auto need = [&](std::size_t n) {
      if (tok.size() != n + 1) {
        throw Error(ctx + ": '" + std::string(key) + "' expects " +
                    std::to_string(n) + " fields");
      }
    };
    if (key == "dataset") {
      // Path may contain spaces: take the rest of the line verbatim.
      auto raw = *line;
      auto at = raw.find("dataset");
      auto rest = raw.substr(at + 7);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
        rest.remove_prefix(1);
      }
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) {
        rest.remove_suffix(1);
      }
      inst.dataset = std::string(rest);
    } else if (key == "format") {
      need(1);
      inst.format = parse_graph_format(std::string(tok[1]));
    } else if (key == "time_factor") {
      need(1);
      const double tf = text::parse_double(tok[1], ctx);
      if (std::abs(tf - metrics.time_factor()) > 1e-12) {
        throw Error(ctx + ": file time_factor " + text::format_double(tf) +
                    " does not match loaded metrics (" +
                    text::format_double(metrics.time_factor()) + ")");
      }
    } else if (key == "seed") {
      need(1);
      inst.seed = text::parse_u64(tok[1], ctx);
    } else if (key == "t_range") {
      need(2);
      inst.params.t_range = {text::parse_double(tok[1], ctx),
                             text::parse_double(tok[2], ctx)};
    } else if (key == "util_range") {
      need(2);
      inst.params.util_range = {text::parse_double(tok[1], ctx),
                                text::parse_double(tok[2], ctx)};
    } else if (key == "duration_range") {
      need(2);
      inst.params.duration_range = {text::parse_double(tok[1], ctx),
                                    text::parse_double(tok[2], ctx)};
    } else if (key == "worker") {
      need(4);
      const PoiLabel label = text::parse_i64(tok[1], ctx);
      auto id = net.find_id(label);
      if (!id) {
        throw Error(ctx + ": worker start POI " + std::to_string(label) +
                    " is not in the network");
      }
      inst.worker.start_poi = *id;
      inst.worker.window_start = text::parse_double(tok[2], ctx);
      inst.worker.window_end = text::parse_double(tok[3], ctx);
      inst.worker.budget = text::parse_double(tok[4], ctx);
      inst.params.window_start = inst.worker.window_start;
      inst.params.window_end = inst.worker.window_end;
      inst.params.budget = inst.worker.budget;
      inst.params.worker_start = label;
      have_worker = true;
    } else if (key == "jobs") {
      need(1);
      job_count = static_cast<std::size_t>(text::parse_i64(tok[1], ctx));
    } else if (key == "job") {
      need(5);
      Job job;
      job.id = text::parse_i64(tok[1], ctx);
      const PoiLabel label = text::parse_i64(tok[2], ctx);
      auto id = net.find_id(label);
      if (!id) {
        throw Error(ctx + ": job " + std::to_string(job.id) +
                    " references POI " + std::to_string(label) +
                    " which is not in the network");
      }
      job.poi = *id;
      job.utility = text::parse_double(tok[3], ctx);
      job.start_time = text::parse_double(tok[4], ctx);
      job.duration = text::parse_double(tok[5], ctx);
      check_job(job, net);
      inst.jobs.push_back(job);
    } else if (key == "end") {
      done = true;
      break;
    } else {
      throw Error(ctx + ": unknown key '" + std::string(key) + "'");
    }
  }

  if (!done) {
    throw Error("instance file: missing 'end' line");
  }
  if (!have_worker) {
    throw Error("instance file: missing worker record");
  }
  if (!job_count || inst.jobs.size() != *job_count) {
    throw Error("instance file: job count mismatch (header says " +
                std::to_string(job_count.value_or(0)) + ", found " +
                std::to_string(inst.jobs.size()) + ")");
  }
  std::unordered_set<JobId> ids;
  for (const auto& job : inst.jobs) {
    if (!ids.insert(job.id).second) {
      throw Error("instance file: duplicate job id " + std::to_string(job.id));
    }
  }
  check_worker(inst.worker, net);
  return inst;
}

ProblemInstance load_instance(const std::string& path, const RoadNetwork& net,
                              const TravelMetrics& metrics) {
  return instance_from_string(text::read_file(path), net, metrics);
}

InstanceFileInfo peek_instance_file(const std::string& path) {
  const std::string content = text::read_file(path);
  InstanceParser parser(content);
  auto first = parser.next_line();
  if (!first || text::split_ws(*first) !=
                    std::vector<std::string_view>{"jobroute-instance", "v1"}) {
    throw Error(path + ": missing 'jobroute-instance v1' header");
  }
  InstanceFileInfo info;
  info.format = GraphFormat::EdgeList;
  info.time_factor = 0.2;
  bool have_dataset = false;
  while (auto line = parser.next_line()) {
    auto tok = text::split_ws(*line);
    if (tok[0] == "dataset" && tok.size() >= 2) {
      auto raw = *line;
      auto rest = raw.substr(raw.find("dataset") + 7);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
        rest.remove_prefix(1);
      }
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) {
        rest.remove_suffix(1);
      }
      info.dataset = std::string(rest);
      have_dataset = true;
    } else if (tok[0] == "format" && tok.size() == 2) {
      info.format = parse_graph_format(std::string(tok[1]));
    } else if (tok[0] == "time_factor" && tok.size() == 2) {
      info.time_factor = text::parse_double(tok[1], path);
    } else if (tok[0] == "worker" || tok[0] == "jobs") {
      break;
    }
  }
  if (!have_dataset || info.dataset.empty()) {
    throw Error(path + ": instance file does not name its dataset; pass "
                       "--graph/--format explicitly");
  }
  return info;
}

} // namespace jobroute
