#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ipp/region.hpp"
#include "ipp/space.hpp"

namespace ipp {

class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lineage recorded by thickenings: `parent[i]` is the input index that
/// spawned output point i, `progenitor[i]` is 1 for the copy at offset 0.
struct Provenance {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint8_t> progenitor;

  bool empty() const { return parent.empty(); }
};

/// A finite simple point set in a window, optionally carrying marks in [0,1].
struct Configuration {
  Space space;
  std::vector<Point> points;
  bool marked = false;
  std::uint64_t seed = 0;
  Provenance provenance;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Throws ConfigurationError if the configuration is not simple, has a mark
/// outside [0,1], or has a point outside the window.
void validate(const Configuration& config);

/// Smallest pairwise distance, +inf for fewer than two points.
double min_pair_distance(const Configuration& config);

std::size_t count_in(const Configuration& config, const Region& region);
Configuration restrict_to(const Configuration& config, const Region& region);
Configuration translated(const Configuration& config, const Displacement& g);

}  // namespace ipp
