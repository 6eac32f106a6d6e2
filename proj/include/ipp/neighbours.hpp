#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ipp/space.hpp"

namespace ipp {

struct IndexPair {
  std::uint32_t i;
  std::uint32_t j;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
  friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

/// All pairs i < j with distance(points[i], points[j]) <= r, sorted.
/// Periodic spaces use a uniform cell grid and OpenMP over points; the
/// hyperbolic disk falls back to a parallel all-pairs scan.
std::vector<IndexPair> close_pairs(const Space& space, std::span<const Point> points,
                                   double r);

/// Serial all-pairs reference for close_pairs. Same output, O(n^2).
std::vector<IndexPair> close_pairs_serial(const Space& space,
                                          std::span<const Point> points, double r);

/// Symmetric adjacency in compressed-row form built from a pair list.
struct NeighbourLists {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> items;

  std::span<const std::uint32_t> of(std::size_t i) const {
    return {items.data() + offsets[i], items.data() + offsets[i + 1]};
  }
};

NeighbourLists neighbour_lists(std::size_t n, std::span<const IndexPair> pairs);

/// Neighbours within r of each point (excluding itself).
NeighbourLists neighbours_within(const Space& space, std::span<const Point> points,
                                 double r);

}  // namespace ipp
