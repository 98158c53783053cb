#include "jobroute/metrics.hpp"

#include <cmath>
#include <limits>

#include "jobroute/error.hpp"

namespace jobroute {

TravelMetrics::TravelMetrics(const RoadNetwork& net, double time_factor,
                             Mode mode)
    : net_(&net), time_factor_(time_factor), mode_(mode) {
  if (!(time_factor > 0.0) || !std::isfinite(time_factor)) {
    throw Error("time factor must be positive, got " +
                std::to_string(time_factor));
  }
  const auto n = static_cast<std::size_t>(net.poi_count());
  if (mode_ == Mode::FullApsp) {
    apsp_.resize(n * n);
    for (std::size_t s = 0; s < n; ++s) {
      auto row = single_source_costs(net, static_cast<PoiId>(s));
      std::copy(row.begin(), row.end(), apsp_.begin() + s * n);
    }
  } else {
    // Sized once here and never resized, so call_once slots stay put.
    cache_ = std::vector<SourceRow>(n);
  }
}

const std::vector<double>& TravelMetrics::row(PoiId source) const {
  auto& slot = cache_[static_cast<std::size_t>(source)];
  std::call_once(slot.once,
                 [&] { slot.dist = single_source_costs(*net_, source); });
  return slot.dist;
}

std::optional<double> TravelMetrics::cost(PoiId u, PoiId v) const {
  double d;
  if (mode_ == Mode::FullApsp) {
    d = apsp_[static_cast<std::size_t>(u) *
                  static_cast<std::size_t>(net_->poi_count()) +
              static_cast<std::size_t>(v)];
  } else {
    d = row(u)[static_cast<std::size_t>(v)];
  }
  if (std::isinf(d)) {
    return std::nullopt;
  }
  return d;
}

std::optional<double> TravelMetrics::time(PoiId u, PoiId v) const {
  const auto c = cost(u, v);
  if (!c) {
    return std::nullopt;
  }
  return time_factor_ * *c;
}

std::optional<Travel> TravelMetrics::travel(PoiId u, PoiId v) const {
  const auto c = cost(u, v);
  if (!c) {
    return std::nullopt;
  }
  return Travel{*c, time_factor_ * *c};
}

bool TravelMetrics::reachable(PoiId u, PoiId v) const {
  return cost(u, v).has_value();
}

} // namespace jobroute
