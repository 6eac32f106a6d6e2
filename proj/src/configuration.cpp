#include "ipp/configuration.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ipp/neighbours.hpp"

namespace ipp {

void validate(const Configuration& config) {
  for (std::size_t i = 0; i < config.points.size(); ++i) {
    const auto& p = config.points[i];
    if (!config.space.contains(p)) {
      throw ConfigurationError("point " + std::to_string(i) + " lies outside the window");
    }
    if (config.marked && !(p.mark >= 0.0 && p.mark <= 1.0)) {
      throw ConfigurationError("mark of point " + std::to_string(i) + " is outside [0,1]");
    }
  }
  const auto close = close_pairs(config.space, config.points, kPointEpsilon);
  if (!close.empty()) {
    throw ConfigurationError("configuration is not simple: points " +
                             std::to_string(close.front().i) + " and " +
                             std::to_string(close.front().j) + " coincide");
  }
  if (!config.provenance.empty() &&
      (config.provenance.parent.size() != config.size() ||
       config.provenance.progenitor.size() != config.size())) {
    throw ConfigurationError("provenance length does not match point count");
  }
}

double min_pair_distance(const Configuration& config) {
  double best = std::numeric_limits<double>::infinity();
  const auto& space = config.space;
  const auto n = config.points.size();
  if (n < 2) return best;
  if (!space.periodic()) {
    for (const auto& p : close_pairs(space, config.points, std::numeric_limits<double>::max())) {
      best = std::min(best, space.distance(config.points[p.i], config.points[p.j]));
    }
    return best;
  }
  // Grow the search radius until some pair turns up; the wrapped diameter
  // bounds every distance, so the loop terminates.
  double r = space.half_width() / std::sqrt(static_cast<double>(n));
  for (;; r *= 2.0) {
    const auto pairs = close_pairs(space, config.points, r);
    for (const auto& p : pairs) {
      best = std::min(best, space.distance(config.points[p.i], config.points[p.j]));
    }
    if (!pairs.empty()) return best;
  }
}

std::size_t count_in(const Configuration& config, const Region& region) {
  return static_cast<std::size_t>(std::count_if(
      config.points.begin(), config.points.end(),
      [&](const Point& p) { return region.contains(config.space, p); }));
}

Configuration restrict_to(const Configuration& config, const Region& region) {
  Configuration out;
  out.space = config.space;
  out.marked = config.marked;
  out.seed = config.seed;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (!region.contains(config.space, config.points[i])) continue;
    out.points.push_back(config.points[i]);
    if (!config.provenance.empty()) {
      out.provenance.parent.push_back(config.provenance.parent[i]);
      out.provenance.progenitor.push_back(config.provenance.progenitor[i]);
    }
  }
  return out;
}

Configuration translated(const Configuration& config, const Displacement& g) {
  Configuration out = config;
  for (auto& p : out.points) p = config.space.translate(g, p);
  return out;
}

}  // namespace ipp
