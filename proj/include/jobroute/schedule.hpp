#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jobroute/instance.hpp"

namespace jobroute {

struct ScheduleLeg {
  JobId job_id;
  PoiId from_poi;        // where the worker travelled from for this leg
  double travel_cost;
  double travel_time;
  double arrival_time;   // clock on arrival; early arrival waits
  double job_start;      // equals the job's published start time
  double job_finish;
};

struct Schedule {
  std::vector<ScheduleLeg> legs;
  double total_utility = 0.0;
  double total_travel_cost = 0.0;
  std::size_t jobs_performed = 0;
};

struct ScheduleMeta {
  std::string algorithm;
  std::string instance_path;
  std::optional<std::uint64_t> seed;
};

void save_schedule(const Schedule& s, const ScheduleMeta& meta,
                   const RoadNetwork& net, const std::string& path);
std::string schedule_to_string(const Schedule& s, const ScheduleMeta& meta,
                               const RoadNetwork& net);

std::pair<Schedule, ScheduleMeta> load_schedule(const std::string& path,
                                                const RoadNetwork& net);
std::pair<Schedule, ScheduleMeta> schedule_from_string(const std::string& text,
                                                       const RoadNetwork& net);

} // namespace jobroute
