#include "ipp/region.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ipp {
namespace {

double unit_ball_volume(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: return 4.0 / 3.0 * std::numbers::pi;
  }
}

}  // namespace

Region Region::box(std::array<double, 3> lo, std::array<double, 3> hi,
                   std::int32_t level_lo, std::int32_t level_hi) {
  Region r;
  r.shape = Shape::Box;
  r.lo = lo;
  r.hi = hi;
  r.level_lo = level_lo;
  r.level_hi = level_hi;
  return r;
}

Region Region::ball(Point center, double radius) {
  Region r;
  r.shape = Shape::Ball;
  r.center = center;
  r.radius = radius;
  return r;
}

Region Region::statistics_window(const Space& space) {
  if (!space.periodic()) return ball(Point{}, space.radius() - space.margin());
  std::array<double, 3> hi{};
  for (int a = 0; a < space.dim(); ++a) hi[static_cast<std::size_t>(a)] = space.side(a);
  return box({0.0, 0.0, 0.0}, hi, 0, space.has_levels() ? space.levels() - 1 : 0);
}

bool Region::contains(const Space& space, const Point& p) const {
  if (shape == Shape::Ball) return space.distance(center, p) <= radius;
  for (int a = 0; a < space.dim(); ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (p.x[i] < lo[i] || p.x[i] >= hi[i]) return false;
  }
  if (space.has_levels()) return p.level >= level_lo && p.level <= level_hi;
  return true;
}

double Region::volume(const Space& space) const {
  if (shape == Shape::Box) {
    double v = 1.0;
    for (int a = 0; a < space.dim(); ++a) {
      const auto i = static_cast<std::size_t>(a);
      v *= hi[i] - lo[i];
    }
    if (space.has_levels()) v *= static_cast<double>(level_hi - level_lo + 1);
    return v;
  }
  switch (space.kind()) {
    case SpaceKind::Hyperbolic:
      return hyperbolic_disk_area(radius);
    case SpaceKind::Cylinder: {
      // Sum of base chords over the levels the ball meets.
      double v = 0.0;
      const int k_max = static_cast<int>(std::floor(radius));
      for (int k = -k_max; k <= k_max; ++k) {
        v += 2.0 * std::sqrt(std::max(0.0, radius * radius - double(k) * k));
      }
      return v;
    }
    case SpaceKind::Lattice: {
      // Counting measure scaled by covolume.
      const double s = space.lattice_spacing();
      const int k = static_cast<int>(std::floor(radius / s));
      int count = 0;
      for (int i = -k; i <= k; ++i) {
        for (int j = -k; j <= k; ++j) {
          if (std::hypot(i * s, j * s) <= radius) ++count;
        }
      }
      return count * s * s;
    }
    default:
      return unit_ball_volume(space.dim()) * std::pow(radius, space.dim());
  }
}

std::string Region::describe(const Space& space) const {
  std::ostringstream os;
  os.precision(6);
  if (shape == Shape::Ball) {
    os << "ball(r=" << radius << ")";
    return os.str();
  }
  os << "box(";
  for (int a = 0; a < space.dim(); ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (a) os << "x";
    os << "[" << lo[i] << "," << hi[i] << ")";
  }
  if (space.has_levels()) os << "x{" << level_lo << ".." << level_hi << "}";
  os << ")";
  return os.str();
}

bool disjoint(const Space& space, const Region& a, const Region& b) {
  if (a.shape == Region::Shape::Box && b.shape == Region::Shape::Box) {
    for (int ax = 0; ax < space.dim(); ++ax) {
      const auto i = static_cast<std::size_t>(ax);
      if (a.hi[i] <= b.lo[i] || b.hi[i] <= a.lo[i]) return true;
    }
    if (space.has_levels()) {
      return a.level_hi < b.level_lo || b.level_hi < a.level_lo;
    }
    return false;
  }
  if (a.shape == Region::Shape::Ball && b.shape == Region::Shape::Ball) {
    return space.distance(a.center, b.center) > a.radius + b.radius;
  }
  return false;
}

}  // namespace ipp
