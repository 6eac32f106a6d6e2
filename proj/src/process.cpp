#include "ipp/process.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>

#include "ipp/neighbours.hpp"

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

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_real(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigurationError("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

Configuration empty_like(const Configuration& config) {
  Configuration out;
  out.space = config.space;
  out.seed = config.seed;
  return out;
}

/// Lexicographic key of the displacement from `query` to `p`.
std::array<double, 4> displacement_key(const Space& space, const Point& query, const Point& p) {
  if (!space.periodic()) {
    const Point w = space.recenter(query, p);
    return {w.x[0], w.x[1], 0.0, 0.0};
  }
  const Displacement g = space.displacement(query, p);
  return {g.v[0], g.v[1], g.v[2], static_cast<double>(g.levels)};
}

/// Incrementally filled cell buckets over the periodic axes, used to test
/// "is anything within r of this location".
class DynamicGrid {
 public:
  DynamicGrid(const Space& space, double r) : space_(space), r_(r) {
    std::size_t total = 1;
    for (int a = 0; a < space.axes(); ++a) {
      const auto i = static_cast<std::size_t>(a);
      const double len = space.axis_length(a);
      cells_[i] = std::max(1, static_cast<int>(std::floor(len / r)));
      cells_[i] = std::min(cells_[i], 4096);
      width_[i] = len / cells_[i];
      total *= static_cast<std::size_t>(cells_[i]);
    }
    buckets_.resize(total);
  }

  void insert(const Point& p) { buckets_[flat(cell_of(p))].push_back(p); }

  bool any_within(const Point& p) const {
    const auto home = cell_of(p);
    std::array<std::vector<int>, 3> offs;
    for (int a = 0; a < 3; ++a) {
      const auto i = static_cast<std::size_t>(a);
      if (a >= space_.axes()) {
        offs[i] = {0};
        continue;
      }
      for (int d : {-1, 0, 1}) {
        const int w = (home[i] + d + cells_[i]) % cells_[i];
        if (std::find(offs[i].begin(), offs[i].end(), w) == offs[i].end()) offs[i].push_back(w);
      }
    }
    for (int c2 : offs[2]) {
      for (int c1 : offs[1]) {
        for (int c0 : offs[0]) {
          for (const auto& q : buckets_[flat({c0, c1, c2})]) {
            if (space_.distance(p, q) <= r_) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  std::array<int, 3> cell_of(const Point& p) const {
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < space_.axes(); ++a) {
      const auto i = static_cast<std::size_t>(a);
      const double x = wrap_coord(space_.axis_coord(p, a), space_.axis_length(a));
      c[i] = std::min(cells_[i] - 1, static_cast<int>(x / width_[i]));
    }
    return c;
  }
  std::size_t flat(const std::array<int, 3>& c) const {
    return (static_cast<std::size_t>(c[2]) * static_cast<std::size_t>(cells_[1]) +
            static_cast<std::size_t>(c[1])) *
               static_cast<std::size_t>(cells_[0]) +
           static_cast<std::size_t>(c[0]);
  }

  const Space& space_;
  double r_;
  std::array<int, 3> cells_{1, 1, 1};
  std::array<double, 3> width_{1.0, 1.0, 1.0};
  std::vector<std::vector<Point>> buckets_;
};

}  // namespace

Configuration sample_poisson(const Space& space, double t, Rng& rng) {
  if (t < 0.0) throw ConfigurationError("intensity must be nonnegative");
  if (space.kind() == SpaceKind::Lattice) {
    throw ConfigurationError("Poisson sampling needs a continuous space");
  }
  Configuration out;
  out.space = space;
  if (t == 0.0) return out;
  std::poisson_distribution<long long> count(t * space.volume());
  const auto n = static_cast<std::size_t>(count(rng));
  out.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.points.push_back(space.sample_uniform(rng));
  return out;
}

Configuration sample_lattice_shift(const Space& space, double covol, Rng& rng) {
  if (!(covol > 0.0)) throw ConfigurationError("covolume must be positive");
  if (space.kind() != SpaceKind::Torus) {
    throw ConfigurationError("lattice shifts are sampled on a torus");
  }
  const int d = space.dim();
  const double spacing = std::pow(covol, 1.0 / d);
  const double ratio = space.side(0) / spacing;
  const auto per_axis = static_cast<long long>(std::llround(ratio));
  if (per_axis < 1 || std::abs(ratio - static_cast<double>(per_axis)) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigurationError("window side is not a multiple of the lattice spacing");
  }
  std::array<double, 3> shift{};
  for (int a = 0; a < d; ++a) shift[static_cast<std::size_t>(a)] = uniform01(rng) * spacing;

  Configuration out;
  out.space = space;
  std::array<long long, 3> k{0, 0, 0};
  const long long n2 = d >= 2 ? per_axis : 1;
  const long long n3 = d >= 3 ? per_axis : 1;
  for (k[2] = 0; k[2] < n3; ++k[2]) {
    for (k[1] = 0; k[1] < n2; ++k[1]) {
      for (k[0] = 0; k[0] < per_axis; ++k[0]) {
        Point p;
        for (int a = 0; a < d; ++a) {
          const auto i = static_cast<std::size_t>(a);
          p.x[i] = wrap_coord(shift[i] + static_cast<double>(k[i]) * spacing, space.side(a));
        }
        out.points.push_back(p);
      }
    }
  }
  return out;
}

Configuration iid_mark(Configuration config, Rng& rng) {
  if (config.marked) throw ConfigurationError("configuration is already marked");
  for (auto& p : config.points) p.mark = uniform01(rng);
  config.marked = true;
  return config;
}

Configuration p_thin(const Configuration& config, double p) {
  if (!config.marked) throw ConfigurationError("independent thinning needs marks");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigurationError("retention probability must lie in [0,1]");
  Configuration out = empty_like(config);
  for (const auto& q : config.points) {
    if (q.mark <= p) {
      Point kept = q;
      kept.mark = 0.0;
      out.points.push_back(kept);
    }
  }
  return out;
}

Configuration delta_thin(const Configuration& config, double delta) {
  if (delta < 0.0) throw ConfigurationError("separation must be nonnegative");
  std::vector<std::uint8_t> crowded(config.size(), 0);
  for (const auto& pr : close_pairs(config.space, config.points, delta)) {
    crowded[pr.i] = 1;
    crowded[pr.j] = 1;
  }
  Configuration out = empty_like(config);
  out.marked = config.marked;
  for (std::size_t k = 0; k < config.size(); ++k) {
    if (!crowded[k]) out.points.push_back(config.points[k]);
  }
  return out;
}

Configuration constant_thicken(const Configuration& config, std::span<const Displacement> offsets) {
  const auto zero = std::find_if(offsets.begin(), offsets.end(), [](const Displacement& g) {
    return g.v == std::array<double, 3>{} && g.levels == 0 && g.angle == 0.0;
  });
  if (zero == offsets.end()) throw ConfigurationError("offset set must contain the identity");
  const auto zero_index = static_cast<std::size_t>(zero - offsets.begin());

  Configuration out = empty_like(config);
  out.points.reserve(config.size() * offsets.size());
  for (std::size_t k = 0; k < config.size(); ++k) {
    for (std::size_t f = 0; f < offsets.size(); ++f) {
      Point p = config.space.translate(offsets[f], config.points[k]);
      p.mark = 0.0;
      out.points.push_back(p);
      out.provenance.parent.push_back(static_cast<std::uint32_t>(k));
      out.provenance.progenitor.push_back(f == zero_index ? 1 : 0);
    }
  }
  if (!close_pairs(out.space, out.points, kPointEpsilon).empty()) {
    throw ConfigurationError("translates overlap: input is not separated for this offset set");
  }
  return out;
}

std::size_t voronoi_assign(const Configuration& config, const Point& query) {
  if (config.empty()) throw ConfigurationError("Voronoi assignment in an empty configuration");
  const auto& space = config.space;
  std::size_t best = 0;
  double best_d = space.distance(query, config.points[0]);
  for (std::size_t k = 1; k < config.size(); ++k) {
    const double d = space.distance(query, config.points[k]);
    const double tol = 1e-12 * std::max(1.0, std::min(d, best_d));
    if (d < best_d - tol) {
      best = k;
      best_d = d;
    } else if (std::abs(d - best_d) <= tol &&
               displacement_key(space, query, config.points[k]) <
                   displacement_key(space, query, config.points[best])) {
      best = k;
      best_d = std::min(d, best_d);
    }
  }
  return best;
}

Configuration glue_poisson_in_cells(const Configuration& config, double t) {
  if (!config.marked) throw ConfigurationError("gluing needs a marked configuration");
  if (config.empty()) throw ConfigurationError("gluing needs a nonempty configuration");
  Configuration out = empty_like(config);
  for (std::size_t k = 0; k < config.size(); ++k) {
    // Replication trick: the mark alone seeds this cell's private sample.
    const auto bits = std::bit_cast<std::uint64_t>(config.points[k].mark);
    Rng cell_rng(splitmix64(bits ^ 0x5bd1e9955bd1e995ULL));
    const Configuration copy = sample_poisson(config.space, t, cell_rng);
    for (const auto& p : copy.points) {
      if (voronoi_assign(config, p) == k) out.points.push_back(p);
    }
  }
  return out;
}

Configuration complete_to_net(const Configuration& config, double r) {
  const auto& space = config.space;
  if (!space.periodic() || space.kind() == SpaceKind::Lattice) {
    throw ConfigurationError("net completion needs a continuous periodic space");
  }
  if (!(r > 0.0)) throw ConfigurationError("net radius must be positive");
  if (r > space.half_width()) throw ConfigurationError("net radius exceeds half the window side");

  const double half = 0.5 * r;
  DynamicGrid grid(space, half);
  for (const auto& p : config.points) grid.insert(p);

  Configuration out = config;
  std::array<long long, 3> count{1, 1, 1};
  std::array<double, 3> step{0.0, 0.0, 0.0};
  for (int a = 0; a < space.dim(); ++a) {
    const auto i = static_cast<std::size_t>(a);
    count[i] = static_cast<long long>(std::ceil(space.side(a) / half - 1e-12));
    step[i] = space.side(a) / static_cast<double>(count[i]);
  }
  const long long level_count = space.has_levels() ? space.levels() : 1;
  for (long long lv = 0; lv < level_count; ++lv) {
    for (long long k2 = 0; k2 < count[2]; ++k2) {
      for (long long k1 = 0; k1 < count[1]; ++k1) {
        for (long long k0 = 0; k0 < count[0]; ++k0) {
          Point p;
          p.x[0] = static_cast<double>(k0) * step[0];
          if (space.dim() > 1) p.x[1] = static_cast<double>(k1) * step[1];
          if (space.dim() > 2) p.x[2] = static_cast<double>(k2) * step[2];
          p.level = static_cast<std::int32_t>(lv);
          if (grid.any_within(p)) continue;
          grid.insert(p);
          if (out.marked) p.mark = 0.0;
          out.points.push_back(p);
        }
      }
    }
  }
  out.provenance = {};
  return out;
}

Configuration vertical_coupling(const Configuration& base, int levels) {
  if (base.space.kind() != SpaceKind::Torus || base.space.dim() != 1) {
    throw ConfigurationError("vertical coupling needs a torus_1 base configuration");
  }
  if (levels < 1) throw ConfigurationError("level count must be positive");
  Configuration out;
  out.space = Space::cylinder(base.space.side(0), levels);
  out.seed = base.seed;
  out.points.reserve(base.size() * static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) {
    for (const auto& p : base.points) {
      Point q;
      q.x[0] = p.x[0];
      q.level = l;
      out.points.push_back(q);
    }
  }
  return out;
}

Configuration straighten_phi_n(const Configuration& config, int n) {
  if (!config.marked) throw ConfigurationError("straightening needs a marked configuration");
  if (!config.space.has_levels()) throw ConfigurationError("straightening needs a cylinder space");
  if (n < 1) throw ConfigurationError("column height must be at least 1");
  if (n > config.space.levels()) throw ConfigurationError("column height exceeds the level window");
  const double threshold = 1.0 / static_cast<double>(n);
  Configuration out = empty_like(config);
  std::uint32_t parent = 0;
  for (const auto& p : config.points) {
    if (p.mark <= threshold) {
      for (int k = 0; k < n; ++k) {
        Point q = config.space.translate(Displacement{{}, k, 0.0}, p);
        q.mark = 0.0;
        out.points.push_back(q);
        out.provenance.parent.push_back(parent);
        out.provenance.progenitor.push_back(k == 0 ? 1 : 0);
      }
      ++parent;
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> columns(const Configuration& config) {
  std::vector<std::size_t> order(config.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = config.points[a];
    const auto& pb = config.points[b];
    return std::tie(pa.x[0], pa.level) < std::tie(pb.x[0], pb.level);
  });
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || config.points[order[k]].x[0] - config.points[order[k - 1]].x[0] > kPointEpsilon) {
      out.emplace_back();
    }
    out.back().push_back(order[k]);
  }
  return out;
}

ProcessSpec poisson_process(const Space& space, double t) {
  return {"poisson:" + std::to_string(t), space, t,
          [space, t](Rng& rng) { return sample_poisson(space, t, rng); }};
}

ProcessSpec iid_poisson_process(const Space& space, double t) {
  return {"iid_poisson:" + std::to_string(t), space, t,
          [space, t](Rng& rng) { return iid_mark(sample_poisson(space, t, rng), rng); }};
}

ProcessSpec lattice_shift_process(const Space& space, double covol) {
  return {"lattice:" + std::to_string(covol), space, 1.0 / covol,
          [space, covol](Rng& rng) { return sample_lattice_shift(space, covol, rng); }};
}

ProcessSpec vertical_poisson_process(const Space& cylinder, double t) {
  if (!cylinder.has_levels()) throw ConfigurationError("vertical Poisson needs a cylinder space");
  const Space base = Space::torus(1, cylinder.side(0));
  const int levels = cylinder.levels();
  return {"vpoisson:" + std::to_string(t), cylinder, t, [base, t, levels](Rng& rng) {
            return vertical_coupling(sample_poisson(base, t, rng), levels);
          }};
}

ProcessSpec then(ProcessSpec base, std::string step_name,
                 std::function<Configuration(Configuration, Rng&)> step,
                 std::optional<double> intensity_factor) {
  ProcessSpec out;
  out.name = base.name + "|" + step_name;
  out.space = base.space;
  if (base.intensity && intensity_factor) out.intensity = *base.intensity * *intensity_factor;
  auto sampler = std::move(base.sample);
  out.sample = [sampler = std::move(sampler), step = std::move(step)](Rng& rng) {
    return step(sampler(rng), rng);
  };
  return out;
}

std::vector<Displacement> parse_offsets(const Space& space, std::string_view text) {
  std::vector<Displacement> out;
  for (auto item : split(text, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    Displacement g;
    const auto at = item.find('@');
    if (at != std::string_view::npos) {
      g.levels = static_cast<std::int32_t>(std::lround(to_real(item.substr(at + 1))));
      item = item.substr(0, at);
    }
    const auto coords = split(item, ',');
    if (static_cast<int>(coords.size()) > space.dim()) {
      throw ConfigurationError("offset has more coordinates than the space");
    }
    for (std::size_t k = 0; k < coords.size(); ++k) g.v[k] = to_real(coords[k]);
    out.push_back(g);
  }
  return out;
}

ProcessSpec parse_process(const Space& space, std::string_view descriptor) {
  const auto stages = split(descriptor, '|');
  auto head = split(trim(stages[0]), ':');
  if (head.size() != 2) throw ConfigurationError("process family needs one parameter: '" + std::string(stages[0]) + "'");
  const double param = to_real(head[1]);
  ProcessSpec spec;
  if (head[0] == "poisson") {
    spec = poisson_process(space, param);
  } else if (head[0] == "iid_poisson") {
    spec = iid_poisson_process(space, param);
  } else if (head[0] == "lattice") {
    spec = lattice_shift_process(space, param);
  } else if (head[0] == "vpoisson") {
    spec = vertical_poisson_process(space, param);
  } else {
    throw ConfigurationError("unknown process family '" + std::string(head[0]) + "'");
  }
  for (std::size_t s = 1; s < stages.size(); ++s) {
    const auto stage = trim(stages[s]);
    const auto colon = stage.find(':');
    const auto name = stage.substr(0, colon);
    const auto arg = colon == std::string_view::npos ? std::string_view{} : stage.substr(colon + 1);
    if (name == "mark") {
      spec = then(std::move(spec), "mark", [](Configuration c, Rng& rng) { return iid_mark(std::move(c), rng); }, 1.0);
    } else if (name == "pthin") {
      const double p = to_real(arg);
      spec = then(std::move(spec), std::string(stage),
                  [p](Configuration c, Rng&) { return p_thin(c, p); }, p);
    } else if (name == "dthin") {
      const double d = to_real(arg);
      spec = then(std::move(spec), std::string(stage),
                  [d](Configuration c, Rng&) { return delta_thin(c, d); }, std::nullopt);
    } else if (name == "thicken") {
      auto offsets = parse_offsets(space, arg);
      const double factor = static_cast<double>(offsets.size());
      spec = then(std::move(spec), std::string(stage),
                  [offsets](Configuration c, Rng&) { return constant_thicken(c, offsets); }, factor);
    } else if (name == "phi") {
      const int n = static_cast<int>(std::lround(to_real(arg)));
      spec = then(std::move(spec), std::string(stage),
                  [n](Configuration c, Rng&) { return straighten_phi_n(c, n); }, 1.0);
    } else if (name == "net") {
      const double r = to_real(arg);
      spec = then(std::move(spec), std::string(stage),
                  [r](Configuration c, Rng&) { return complete_to_net(c, r); }, std::nullopt);
    } else if (name == "glue") {
      const double t = to_real(arg);
      auto glued = then(std::move(spec), std::string(stage),
                        [t](Configuration c, Rng&) { return glue_poisson_in_cells(c, t); }, std::nullopt);
      glued.intensity = t;
      spec = std::move(glued);
    } else {
      throw ConfigurationError("unknown factor map '" + std::string(name) + "'");
    }
  }
  return spec;
}

}  // namespace ipp
