#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ipp/rng.hpp"

namespace ipp {

/// Two points closer than this are considered equal.
inline constexpr double kPointEpsilon = 1e-9;

class SpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SpaceKind {
  Torus,       ///< flat torus of dimension 1..3
  Cylinder,    ///< torus_1 x Z_levels, unit level spacing
  CylinderR,   ///< torus_1 x torus_1 of height H (the G x R analogue)
  Hyperbolic,  ///< Poincare disk truncated at hyperbolic radius R_max
  Lattice,     ///< Z^2 scaled to a given covolume, periodic
};

struct Point {
  std::array<double, 3> x{};
  std::int32_t level = 0;
  double mark = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// A group element acting by translation. On the hyperbolic disk only
/// rotations about the origin are supported, so `v` must be zero there.
struct Displacement {
  std::array<double, 3> v{};
  std::int32_t levels = 0;
  double angle = 0.0;
};

/// A homogeneous space realized in a bounded window. All kinds except the
/// hyperbolic disk are periodic; for those the metric is the wrapped l2
/// norm over "axes", where a cylinder's level is an axis of unit spacing.
class Space {
 public:
  static Space torus(int dim, double side);
  static Space cylinder(double side, int levels);
  static Space cylinder_r(double side, double height);
  static Space hyperbolic(double radius, double margin);
  static Space lattice(double covol, int cells = 16);

  /// Parses `torus1:L`, `torus2:L`, `torus3:L`, `cyl:L:levels`, `cylR:L:H`,
  /// `hyp:Rmax:margin`, `lat2:covol[:cells]`.
  static Space parse(std::string_view descriptor);
  std::string descriptor() const;

  SpaceKind kind() const { return kind_; }
  bool periodic() const { return kind_ != SpaceKind::Hyperbolic; }
  /// Number of real coordinates per point.
  int dim() const { return dim_; }
  /// Number of periodic axes (real coordinates plus the level axis).
  int axes() const { return axes_; }
  double axis_length(int axis) const { return sides_[static_cast<std::size_t>(axis)]; }
  double side(int axis) const { return axis_length(axis); }
  int levels() const { return levels_; }
  bool has_levels() const { return kind_ == SpaceKind::Cylinder; }
  double radius() const { return radius_; }
  double margin() const { return margin_; }
  double lattice_spacing() const { return spacing_; }
  /// Largest radius for which balls do not wrap around the window.
  double half_width() const;

  double volume() const;

  /// Coordinate of `p` along a periodic axis (level as a real number).
  double axis_coord(const Point& p, int axis) const {
    return axis < dim_ ? p.x[static_cast<std::size_t>(axis)]
                       : static_cast<double>(p.level);
  }

  double distance(const Point& a, const Point& b) const;
  Point translate(const Displacement& g, const Point& p) const;
  /// Minimum-image displacement taking `from` to `to` (periodic kinds).
  Displacement displacement(const Point& from, const Point& to) const;
  /// Isometry image of `p` under the map sending `root` to the origin.
  Point recenter(const Point& root, const Point& p) const;
  Point sample_uniform(Rng& rng) const;
  bool contains(const Point& p) const;
  /// Distance from the origin, in the space metric.
  double norm(const Point& p) const { return distance(Point{}, p); }
  /// Reduces coordinates into the window (periodic kinds only).
  Point wrap(Point p) const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  SpaceKind kind_ = SpaceKind::Torus;
  int dim_ = 1;
  int axes_ = 1;
  std::array<double, 3> sides_{1.0, 1.0, 1.0};
  int levels_ = 1;
  double radius_ = 0.0;
  double margin_ = 0.0;
  double spacing_ = 0.0;
  double covol_ = 0.0;
};

/// Area of a hyperbolic disk (curvature -1) of radius r.
double hyperbolic_disk_area(double r);

/// Wraps x into [0, length).
double wrap_coord(double x, double length);
/// Signed minimum-image difference in [-length/2, length/2).
double wrapped_delta(double d, double length);

}  // namespace ipp
