#include "jobroute/schedule.hpp"

#include <sstream>

#include "jobroute/error.hpp"
#include "text_util.hpp"

namespace jobroute {

std::string schedule_to_string(const Schedule& s, const ScheduleMeta& meta,
                               const RoadNetwork& net) {
  std::ostringstream out;
  out << "jobroute-schedule v1\n";
  out << "algorithm " << meta.algorithm << "\n";
  out << "instance " << meta.instance_path << "\n";
  if (meta.seed) {
    out << "seed " << *meta.seed << "\n";
  }
  out << "totals " << text::format_double(s.total_utility) << " "
      << text::format_double(s.total_travel_cost) << " " << s.jobs_performed
      << "\n";
  for (const auto& leg : s.legs) {
    out << "leg " << leg.job_id << " " << net.label(leg.from_poi) << " "
        << text::format_double(leg.travel_cost) << " "
        << text::format_double(leg.travel_time) << " "
        << text::format_double(leg.arrival_time) << " "
        << text::format_double(leg.job_start) << " "
        << text::format_double(leg.job_finish) << "\n";
  }
  out << "end\n";
  return out.str();
}

void save_schedule(const Schedule& s, const ScheduleMeta& meta,
                   const RoadNetwork& net, const std::string& path) {
  text::write_file(path, schedule_to_string(s, meta, net));
}

std::pair<Schedule, ScheduleMeta> schedule_from_string(const std::string& content,
                                                       const RoadNetwork& net) {
  Schedule s;
  ScheduleMeta meta;
  bool header_seen = false;
  bool totals_seen = false;
  bool done = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;

  while (pos <= content.size() && !done) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) {
      eol = content.size();
    }
    auto line = std::string_view(content).substr(pos, eol - pos);
    const bool at_end = eol == content.size();
    pos = eol + 1;
    ++lineno;
    auto tok = text::split_ws(line);
    if (tok.empty() || tok[0].front() == '#') {
      if (at_end) {
        break;
      }
      continue;
    }
    const std::string ctx = "schedule line " + std::to_string(lineno);
    if (!header_seen) {
      if (tok.size() != 2 || tok[0] != "jobroute-schedule" || tok[1] != "v1") {
        throw Error("schedule file: missing 'jobroute-schedule v1' header");
      }
      header_seen = true;
    } else if (tok[0] == "algorithm" && tok.size() == 2) {
      meta.algorithm = std::string(tok[1]);
    } else if (tok[0] == "instance") {
      auto raw = line;
      auto rest = raw.substr(raw.find("instance") + 8);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
        rest.remove_prefix(1);
      }
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) {
        rest.remove_suffix(1);
      }
      meta.instance_path = std::string(rest);
    } else if (tok[0] == "seed" && tok.size() == 2) {
      meta.seed = text::parse_u64(tok[1], ctx);
    } else if (tok[0] == "totals") {
      if (tok.size() != 4) {
        throw Error(ctx + ": totals expects 3 fields");
      }
      s.total_utility = text::parse_double(tok[1], ctx);
      s.total_travel_cost = text::parse_double(tok[2], ctx);
      s.jobs_performed =
          static_cast<std::size_t>(text::parse_i64(tok[3], ctx));
      totals_seen = true;
    } else if (tok[0] == "leg") {
      if (tok.size() != 8) {
        throw Error(ctx + ": leg expects 7 fields");
      }
      ScheduleLeg leg;
      leg.job_id = text::parse_i64(tok[1], ctx);
      const PoiLabel label = text::parse_i64(tok[2], ctx);
      auto id = net.find_id(label);
      if (!id) {
        throw Error(ctx + ": POI " + std::to_string(label) +
                    " is not in the network");
      }
      leg.from_poi = *id;
      leg.travel_cost = text::parse_double(tok[3], ctx);
      leg.travel_time = text::parse_double(tok[4], ctx);
      leg.arrival_time = text::parse_double(tok[5], ctx);
      leg.job_start = text::parse_double(tok[6], ctx);
      leg.job_finish = text::parse_double(tok[7], ctx);
      s.legs.push_back(leg);
    } else if (tok[0] == "end") {
      done = true;
    } else {
      throw Error(ctx + ": unknown key '" + std::string(tok[0]) + "'");
    }
    if (at_end) {
      break;
    }
  }

  if (!header_seen || !totals_seen || !done) {
    throw Error("schedule file: truncated (header, totals or end missing)");
  }
  return {std::move(s), std::move(meta)};
}

std::pair<Schedule, ScheduleMeta> load_schedule(const std::string& path,
                                                const RoadNetwork& net) {
  return schedule_from_string(text::read_file(path), net);
}

} // namespace jobroute
