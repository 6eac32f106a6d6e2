#include "ipp/space.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

namespace ipp {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw SpaceError("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw SpaceError("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw SpaceError(std::string(what) + " must be positive");
  }
}

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

using Complex = std::complex<double>;

Complex as_complex(const Point& p) { return {p.x[0], p.x[1]}; }

}  // namespace

double wrap_coord(double x, double length) {
  double r = x - length * std::floor(x / length);
  if (r >= length) r -= length;
  if (r < 0.0) r = 0.0;
  return r;
}

double wrapped_delta(double d, double length) {
  d -= length * std::floor(d / length + 0.5);
  return d;
}

double hyperbolic_disk_area(double r) {
  return 2.0 * std::numbers::pi * (std::cosh(r) - 1.0);
}

Space Space::torus(int dim, double side) {
  if (dim < 1 || dim > 3) throw SpaceError("torus dimension must be 1, 2 or 3");
  require_positive(side, "side length");
  Space s;
  s.kind_ = SpaceKind::Torus;
  s.dim_ = dim;
  s.axes_ = dim;
  s.sides_ = {side, side, side};
  return s;
}

Space Space::cylinder(double side, int levels) {
  require_positive(side, "side length");
  if (levels < 1) throw SpaceError("level count must be positive");
  Space s;
  s.kind_ = SpaceKind::Cylinder;
  s.dim_ = 1;
  s.axes_ = 2;
  s.sides_ = {side, static_cast<double>(levels), 1.0};
  s.levels_ = levels;
  return s;
}

Space Space::cylinder_r(double side, double height) {
  require_positive(side, "side length");
  require_positive(height, "height");
  Space s;
  s.kind_ = SpaceKind::CylinderR;
  s.dim_ = 2;
  s.axes_ = 2;
  s.sides_ = {side, height, 1.0};
  return s;
}

Space Space::hyperbolic(double radius, double margin) {
  require_positive(radius, "disk radius");
  if (margin < 0.0) throw SpaceError("margin must be nonnegative");
  if (margin >= radius) throw SpaceError("margin must be smaller than the disk radius");
  Space s;
  s.kind_ = SpaceKind::Hyperbolic;
  s.dim_ = 2;
  s.axes_ = 2;
  s.radius_ = radius;
  s.margin_ = margin;
  return s;
}

Space Space::lattice(double covol, int cells) {
  require_positive(covol, "covolume");
  if (cells < 1) throw SpaceError("lattice cell count must be positive");
  Space s;
  s.kind_ = SpaceKind::Lattice;
  s.dim_ = 2;
  s.axes_ = 2;
  s.spacing_ = std::sqrt(covol);
  s.covol_ = covol;
  const double side = s.spacing_ * cells;
  s.sides_ = {side, side, 1.0};
  return s;
}

Space Space::parse(std::string_view descriptor) {
  const auto parts = split(descriptor, ':');
  const auto& head = parts[0];
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw SpaceError("wrong number of fields in space descriptor '" +
                       std::string(descriptor) + "'");
    }
  };
  if (head == "torus1" || head == "torus2" || head == "torus3") {
    need(2, 2);
    return torus(head[5] - '0', parse_real(parts[1], "side"));
  }
  if (head == "cyl") {
    need(3, 3);
    return cylinder(parse_real(parts[1], "side"), parse_int(parts[2], "levels"));
  }
  if (head == "cylR") {
    need(3, 3);
    return cylinder_r(parse_real(parts[1], "side"), parse_real(parts[2], "height"));
  }
  if (head == "hyp") {
    need(3, 3);
    return hyperbolic(parse_real(parts[1], "radius"), parse_real(parts[2], "margin"));
  }
  if (head == "lat2") {
    need(2, 3);
    const int cells = parts.size() == 3 ? parse_int(parts[2], "cells") : 16;
    return lattice(parse_real(parts[1], "covolume"), cells);
  }
  throw SpaceError("unknown space kind '" + std::string(head) + "'");
}

std::string Space::descriptor() const {
  switch (kind_) {
    case SpaceKind::Torus:
      return "torus" + std::to_string(dim_) + ":" + fmt_real(sides_[0]);
    case SpaceKind::Cylinder:
      return "cyl:" + fmt_real(sides_[0]) + ":" + std::to_string(levels_);
    case SpaceKind::CylinderR:
      return "cylR:" + fmt_real(sides_[0]) + ":" + fmt_real(sides_[1]);
    case SpaceKind::Hyperbolic:
      return "hyp:" + fmt_real(radius_) + ":" + fmt_real(margin_);
    case SpaceKind::Lattice:
      return "lat2:" + fmt_real(covol_) + ":" +
             std::to_string(static_cast<int>(std::lround(sides_[0] / spacing_)));
  }
  return {};
}

double Space::half_width() const {
  if (!periodic()) return radius_;
  double m = sides_[0];
  for (int a = 1; a < axes_; ++a) m = std::min(m, sides_[static_cast<std::size_t>(a)]);
  return 0.5 * m;
}

double Space::volume() const {
  switch (kind_) {
    case SpaceKind::Hyperbolic:
      return hyperbolic_disk_area(radius_);
    case SpaceKind::Cylinder:
      return sides_[0] * levels_;
    default: {
      double v = 1.0;
      for (int a = 0; a < axes_; ++a) v *= sides_[static_cast<std::size_t>(a)];
      return v;
    }
  }
}

double Space::distance(const Point& a, const Point& b) const {
  if (kind_ == SpaceKind::Hyperbolic) {
    const double dx = a.x[0] - b.x[0];
    const double dy = a.x[1] - b.x[1];
    const double num = 2.0 * (dx * dx + dy * dy);
    const double ra = 1.0 - (a.x[0] * a.x[0] + a.x[1] * a.x[1]);
    const double rb = 1.0 - (b.x[0] * b.x[0] + b.x[1] * b.x[1]);
    if (num == 0.0) return 0.0;
    return std::acosh(1.0 + num / (ra * rb));
  }
  double sq = 0.0;
  for (int ax = 0; ax < axes_; ++ax) {
    const double d = wrapped_delta(axis_coord(b, ax) - axis_coord(a, ax),
                                   sides_[static_cast<std::size_t>(ax)]);
    sq += d * d;
  }
  return std::sqrt(sq);
}

Point Space::wrap(Point p) const {
  if (!periodic()) return p;
  for (int ax = 0; ax < dim_; ++ax) {
    auto& c = p.x[static_cast<std::size_t>(ax)];
    c = wrap_coord(c, sides_[static_cast<std::size_t>(ax)]);
  }
  if (has_levels()) {
    p.level = static_cast<std::int32_t>(((p.level % levels_) + levels_) % levels_);
  }
  return p;
}

Point Space::translate(const Displacement& g, const Point& p) const {
  if (kind_ == SpaceKind::Hyperbolic) {
    if (g.v[0] != 0.0 || g.v[1] != 0.0 || g.v[2] != 0.0 || g.levels != 0) {
      throw SpaceError("the hyperbolic window supports only rotations about the origin");
    }
    const Complex z = as_complex(p) * std::polar(1.0, g.angle);
    Point out = p;
    out.x[0] = z.real();
    out.x[1] = z.imag();
    return out;
  }
  if (g.angle != 0.0) throw SpaceError("rotations are only supported on the hyperbolic disk");
  if (!has_levels() && g.levels != 0) throw SpaceError("level shift on a space without levels");
  if (kind_ == SpaceKind::Lattice) {
    for (int ax = 0; ax < dim_; ++ax) {
      const double k = g.v[static_cast<std::size_t>(ax)] / spacing_;
      if (std::abs(k - std::round(k)) > kPointEpsilon) {
        throw SpaceError("lattice space translations must be lattice vectors");
      }
    }
  }
  Point out = p;
  for (int ax = 0; ax < dim_; ++ax) out.x[static_cast<std::size_t>(ax)] += g.v[static_cast<std::size_t>(ax)];
  out.level += g.levels;
  return wrap(out);
}

Displacement Space::displacement(const Point& from, const Point& to) const {
  if (!periodic()) throw SpaceError("displacement is defined only on periodic spaces");
  Displacement g;
  for (int ax = 0; ax < dim_; ++ax) {
    const auto i = static_cast<std::size_t>(ax);
    g.v[i] = wrapped_delta(to.x[i] - from.x[i], sides_[i]);
  }
  if (has_levels()) {
    g.levels = static_cast<std::int32_t>(
        std::lround(wrapped_delta(static_cast<double>(to.level - from.level), levels_)));
  }
  return g;
}

Point Space::recenter(const Point& root, const Point& p) const {
  if (kind_ == SpaceKind::Hyperbolic) {
    const Complex a = as_complex(root);
    const Complex z = as_complex(p);
    const Complex w = (z - a) / (1.0 - std::conj(a) * z);
    Point out = p;
    out.x[0] = w.real();
    out.x[1] = w.imag();
    return out;
  }
  Point out = p;
  for (int ax = 0; ax < dim_; ++ax) {
    const auto i = static_cast<std::size_t>(ax);
    out.x[i] = wrap_coord(p.x[i] - root.x[i], sides_[i]);
  }
  if (has_levels()) out.level = p.level - root.level;
  return wrap(out);
}

Point Space::sample_uniform(Rng& rng) const {
  Point p;
  switch (kind_) {
    case SpaceKind::Hyperbolic: {
      // Invert the radial law with density proportional to sinh(r).
      const double u = uniform01(rng);
      const double r = std::acosh(1.0 + u * (std::cosh(radius_) - 1.0));
      const double theta = 2.0 * std::numbers::pi * uniform01(rng);
      const double e = std::tanh(0.5 * r);
      p.x[0] = e * std::cos(theta);
      p.x[1] = e * std::sin(theta);
      return p;
    }
    case SpaceKind::Lattice: {
      const auto cells = static_cast<std::uint64_t>(std::llround(sides_[0] / spacing_));
      p.x[0] = static_cast<double>(rng() % cells) * spacing_;
      p.x[1] = static_cast<double>(rng() % cells) * spacing_;
      return p;
    }
    default:
      for (int ax = 0; ax < dim_; ++ax) {
        const auto i = static_cast<std::size_t>(ax);
        p.x[i] = wrap_coord(uniform01(rng) * sides_[i], sides_[i]);
      }
      if (has_levels()) p.level = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(levels_));
      return p;
  }
}

bool Space::contains(const Point& p) const {
  if (kind_ == SpaceKind::Hyperbolic) {
    const double e2 = p.x[0] * p.x[0] + p.x[1] * p.x[1];
    if (!(e2 < 1.0)) return false;
    return norm(p) <= radius_ + kPointEpsilon;
  }
  for (int ax = 0; ax < dim_; ++ax) {
    const auto i = static_cast<std::size_t>(ax);
    if (!(p.x[i] >= 0.0 && p.x[i] < sides_[i])) return false;
  }
  for (int ax = dim_; ax < 3; ++ax) {
    if (p.x[static_cast<std::size_t>(ax)] != 0.0) return false;
  }
  if (has_levels()) return p.level >= 0 && p.level < levels_;
  return p.level == 0;
}

}  // namespace ipp
