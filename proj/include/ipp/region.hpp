#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "ipp/space.hpp"

namespace ipp {

/// A bounded Borel region used as a statistics window or an fdd window.
/// Boxes are axis-aligned in window coordinates (no wrap); balls are
/// measured in the space metric around `center`.
struct Region {
  enum class Shape { Box, Ball };

  Shape shape = Shape::Box;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  std::int32_t level_lo = 0;
  std::int32_t level_hi = 0;  ///< inclusive
  Point center{};
  double radius = 0.0;

  static Region box(std::array<double, 3> lo, std::array<double, 3> hi,
                    std::int32_t level_lo = 0, std::int32_t level_hi = 0);
  static Region ball(Point center, double radius);
  /// The whole window, or the margin-eroded disk on free-boundary spaces.
  static Region statistics_window(const Space& space);

  bool contains(const Space& space, const Point& p) const;
  double volume(const Space& space) const;
  std::string describe(const Space& space) const;
};

/// True when the regions cannot share a point (boxes: disjoint
/// intervals on some axis; balls: centres farther apart than the radii).
bool disjoint(const Space& space, const Region& a, const Region& b);

}  // namespace ipp
