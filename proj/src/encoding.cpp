#include "ipp/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ipp/neighbours.hpp"

namespace ipp {
namespace {

constexpr double kAnchor = -0.9;
constexpr double kFirstBit = 0.55;
constexpr double kBitStep = 0.025;
constexpr int kBits = 16;

void check_encodable(const Space& space, double delta) {
  if (!space.periodic() || space.kind() == SpaceKind::Lattice) {
    throw ConfigurationError("local encoding needs a continuous periodic space");
  }
  // Bit satellites must stay well above the simplicity threshold.
  if (!(kBitStep * delta / 100.0 > 1e3 * kPointEpsilon)) {
    throw ConfigurationError("separation too small for the encoding resolution");
  }
  if (!(delta < space.half_width())) throw ConfigurationError("separation exceeds half the window");
}

}  // namespace

std::uint16_t quantize_mark(double mark) {
  return static_cast<std::uint16_t>(std::lround(std::clamp(mark, 0.0, 1.0) * 65535.0));
}

double dequantize_mark(std::uint16_t code) { return static_cast<double>(code) / 65535.0; }

Configuration encode_marks(const Configuration& config, double delta) {
  if (!config.marked) throw ConfigurationError("encoding needs a marked configuration");
  check_encodable(config.space, delta);
  if (!close_pairs(config.space, config.points, delta).empty()) {
    throw ConfigurationError("input is not delta-separated");
  }
  const double s = delta / 100.0;
  Configuration out;
  out.space = config.space;
  out.seed = config.seed;
  out.points.reserve(config.size() * 8);
  for (const auto& p : config.points) {
    Point centre = p;
    centre.mark = 0.0;
    out.points.push_back(centre);
  }
  for (const auto& p : config.points) {
    const auto code = quantize_mark(p.mark);
    auto satellite = [&](double offset) {
      Point q = p;
      q.mark = 0.0;
      q.x[0] = wrap_coord(p.x[0] + offset * s, config.space.side(0));
      out.points.push_back(q);
    };
    satellite(kAnchor);
    for (int k = 0; k < kBits; ++k) {
      if (code & (1u << k)) satellite(kFirstBit + kBitStep * k);
    }
  }
  return out;
}

Configuration decode_marks(const Configuration& encoded, double delta) {
  if (encoded.marked) throw ConfigurationError("encoded configurations are unmarked");
  check_encodable(encoded.space, delta);
  const double s = delta / 100.0;
  const auto& space = encoded.space;
  const auto n = encoded.size();

  // Clusters: single linkage at 2s joins a centre with its satellites
  // while distinct clusters stay about delta apart.
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& pr : close_pairs(space, encoded.points, 2.0 * s)) {
    const auto a = find(pr.i), b = find(pr.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<std::uint32_t>> clusters(n);
  for (std::uint32_t k = 0; k < n; ++k) clusters[find(k)].push_back(k);

  struct Decoded {
    std::uint32_t centre;
    std::uint16_t code;
  };
  std::vector<Decoded> decoded;
  for (const auto& members : clusters) {
    if (members.empty()) continue;
    const auto& ref = encoded.points[members.front()];
    // Offsets along the first axis relative to one member; the cluster is
    // far smaller than the window so the minimum image is unambiguous.
    std::vector<std::pair<double, std::uint32_t>> along;
    for (auto m : members) {
      const auto& q = encoded.points[m];
      for (int a = 1; a < space.axes(); ++a) {
        if (std::abs(wrapped_delta(space.axis_coord(q, a) - space.axis_coord(ref, a),
                                   space.axis_length(a))) > kPointEpsilon) {
          throw ConfigurationError("cluster is not aligned with the encoding axis");
        }
      }
      along.emplace_back(wrapped_delta(q.x[0] - ref.x[0], space.side(0)), m);
    }
    std::sort(along.begin(), along.end());
    if (along.size() < 2) throw ConfigurationError("isolated point: input is not an encoding");
    const double anchor_gap = (along[1].first - along[0].first) / s;
    if (std::abs(anchor_gap + kAnchor) > 0.25 * kBitStep) {
      throw ConfigurationError("anchor satellite missing: input is not an encoding");
    }
    const auto centre = along[1].second;
    std::uint32_t code = 0;
    for (std::size_t k = 2; k < along.size(); ++k) {
      const double off = (along[k].first - along[1].first) / s;
      const double bit = (off - kFirstBit) / kBitStep;
      const long b = std::lround(bit);
      if (b < 0 || b >= kBits || std::abs(bit - static_cast<double>(b)) > 0.25 ||
          (code & (1u << b))) {
        throw ConfigurationError("satellite off the code grid: input is not an encoding");
      }
      code |= 1u << b;
    }
    decoded.push_back({centre, static_cast<std::uint16_t>(code)});
  }
  std::sort(decoded.begin(), decoded.end(),
            [](const Decoded& a, const Decoded& b) { return a.centre < b.centre; });

  Configuration out;
  out.space = space;
  out.seed = encoded.seed;
  out.marked = true;
  for (const auto& d : decoded) {
    Point p = encoded.points[d.centre];
    p.mark = dequantize_mark(d.code);
    out.points.push_back(p);
  }
  return out;
}

}  // namespace ipp
