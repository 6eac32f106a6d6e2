#include "ipp/weakconv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ipp/neighbours.hpp"
#include "ipp/rng.hpp"
#include "ipp/stats.hpp"

namespace ipp {
namespace {

/// Kuhn's augmenting paths on the bipartite graph of pairs within threshold.
class Matcher {
 public:
  explicit Matcher(const std::vector<std::vector<std::uint32_t>>& adj, std::size_t right)
      : adj_(adj), match_right_(right, -1) {}

  bool perfect() {
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      seen_.assign(match_right_.size(), 0);
      if (!augment(u)) return false;
    }
    return true;
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::size_t v = 0; v < match_right_.size(); ++v) {
      if (match_right_[v] >= 0) out.emplace_back(static_cast<std::uint32_t>(match_right_[v]), static_cast<std::uint32_t>(v));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  bool augment(std::size_t u) {
    for (auto v : adj_[u]) {
      if (seen_[v]) continue;
      seen_[v] = 1;
      if (match_right_[v] < 0 || augment(static_cast<std::size_t>(match_right_[v]))) {
        match_right_[v] = static_cast<std::int64_t>(u);
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<std::uint32_t>>& adj_;
  std::vector<std::int64_t> match_right_;
  std::vector<std::uint8_t> seen_;
};

std::vector<std::vector<std::uint32_t>> threshold_adjacency(const std::vector<std::vector<double>>& d,
                                                            double threshold) {
  std::vector<std::vector<std::uint32_t>> adj(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d[i].size(); ++j) {
      if (d[i][j] <= threshold) adj[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return adj;
}

std::vector<std::vector<double>> distance_table(const Space& space, std::span<const Point> a,
                                                std::span<const Point> b) {
  std::vector<std::vector<double>> d(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) d[i][j] = space.distance(a[i], b[j]);
  }
  return d;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string WobbleResult::csv_row() const {
  return std::string(feasible ? "1" : "0") + "," + (feasible ? fmt(eps) : std::string("inf")) + "," +
         fmt(radius) + "," + std::to_string(n_a) + "," + std::to_string(n_b);
}

bool matching_within(const Space& space, std::span<const Point> a, std::span<const Point> b,
                     double threshold) {
  if (a.size() != b.size()) return false;
  const auto d = distance_table(space, a, b);
  const auto adj = threshold_adjacency(d, threshold);
  Matcher m(adj, b.size());
  return m.perfect();
}

WobbleResult wobble_distance(const Configuration& a, const Configuration& b, double radius,
                             const Point& center) {
  if (!(a.space == b.space)) throw ConfigurationError("wobble comparison across different spaces");
  const auto& space = a.space;
  if (!(radius > 0.0)) throw ConfigurationError("wobble radius must be positive");
  if (space.periodic() && radius >= space.half_width()) {
    throw ConfigurationError("wobble radius must be below half the window side");
  }
  std::vector<Point> pa, pb;
  std::vector<std::uint32_t> ia, ib;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (space.distance(center, a.points[k]) <= radius) {
      pa.push_back(a.points[k]);
      ia.push_back(static_cast<std::uint32_t>(k));
    }
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (space.distance(center, b.points[k]) <= radius) {
      pb.push_back(b.points[k]);
      ib.push_back(static_cast<std::uint32_t>(k));
    }
  }
  WobbleResult res;
  res.radius = radius;
  res.n_a = pa.size();
  res.n_b = pb.size();
  if (pa.size() != pb.size()) {
    res.feasible = false;
    res.eps = std::numeric_limits<double>::infinity();
    return res;
  }
  res.feasible = true;
  if (pa.empty()) return res;

  const auto d = distance_table(space, pa, pb);
  std::vector<double> levels;
  levels.reserve(pa.size() * pb.size());
  for (const auto& row : d) levels.insert(levels.end(), row.begin(), row.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  // Feasibility is monotone in the threshold, so bisect the sorted levels.
  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto adj = threshold_adjacency(d, levels[mid]);
    Matcher m(adj, pb.size());
    if (m.perfect()) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  res.eps = levels[lo];
  const auto adj = threshold_adjacency(d, res.eps);
  Matcher m(adj, pb.size());
  m.perfect();
  for (const auto& [i, j] : m.pairs()) res.matching.emplace_back(ia[i], ib[j]);
  return res;
}

void FddWindowSet::validate(const Space& space) const {
  if (windows.size() != mark_intervals.size()) throw ConfigurationError("window/mark interval mismatch");
  const Region whole = Region::statistics_window(space);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    if (w.shape == Region::Shape::Box) {
      for (int a = 0; a < space.dim(); ++a) {
        const auto k = static_cast<std::size_t>(a);
        if (w.lo[k] < 0.0 || w.hi[k] > space.side(a) || !(w.lo[k] < w.hi[k])) {
          throw ConfigurationError("fdd window outside the statistics window");
        }
      }
      if (space.has_levels() && (w.level_lo < 0 || w.level_hi >= space.levels() || w.level_lo > w.level_hi)) {
        throw ConfigurationError("fdd window levels outside the space");
      }
    } else if (!whole.contains(space, w.center) || w.radius <= 0.0) {
      throw ConfigurationError("fdd ball outside the statistics window");
    }
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      if (!disjoint(space, w, windows[j])) throw ConfigurationError("fdd windows must be pairwise disjoint");
    }
  }
}

std::vector<std::size_t> FddWindowSet::counts(const Configuration& config) const {
  std::vector<std::size_t> c(windows.size(), 0);
  for (const auto& p : config.points) {
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (!windows[i].contains(config.space, p)) continue;
      if (mark_intervals[i] && !(p.mark >= mark_intervals[i]->first && p.mark <= mark_intervals[i]->second)) continue;
      ++c[i];
    }
  }
  return c;
}

std::string FddWindowSet::describe(const Space& space) const {
  std::string out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (i) out += ";";
    out += windows[i].describe(space);
  }
  return out;
}

std::string FddReport::csv_row() const {
  return fmt(total_variation) + "," + fmt(chi_square) + "," + fmt(dof) + "," + fmt(pvalue) + "," +
         std::to_string(n_a) + "," + std::to_string(n_b) + "," + windows;
}

FddReport fdd_compare(std::span<const Configuration> a, std::span<const Configuration> b,
                      const FddWindowSet& windows, std::optional<std::vector<std::size_t>> max_count) {
  if (a.empty() || b.empty()) throw ConfigurationError("fdd comparison needs two nonempty sample arms");
  const Space& space = a.front().space;
  windows.validate(space);
  const std::size_t k = windows.windows.size();

  std::vector<std::vector<std::size_t>> ca, cb;
  for (const auto& c : a) ca.push_back(windows.counts(c));
  for (const auto& c : b) cb.push_back(windows.counts(c));

  std::vector<std::size_t> cap;
  if (max_count) {
    cap = *max_count;
    if (cap.size() != k) throw ConfigurationError("one truncation level per window is required");
  } else {
    for (std::size_t w = 0; w < k; ++w) {
      std::vector<double> pooled;
      for (const auto& v : ca) pooled.push_back(static_cast<double>(v[w]));
      for (const auto& v : cb) pooled.push_back(static_cast<double>(v[w]));
      cap.push_back(static_cast<std::size_t>(empirical_quantile(pooled, 0.999)));
    }
  }
  using Key = std::vector<std::int64_t>;
  auto tabulate = [&](const std::vector<std::vector<std::size_t>>& rows) {
    std::map<Key, std::size_t> table;
    for (const auto& v : rows) {
      Key key(k);
      for (std::size_t w = 0; w < k; ++w) key[w] = static_cast<std::int64_t>(std::min(v[w], cap[w]));
      ++table[key];
    }
    return table;
  };
  const auto ta = tabulate(ca);
  const auto tb = tabulate(cb);

  FddReport rep;
  rep.n_a = a.size();
  rep.n_b = b.size();
  rep.max_count = cap;
  rep.windows = windows.describe(space);
  std::map<Key, std::pair<double, double>> joint;
  for (const auto& [key, n] : ta) joint[key].first = static_cast<double>(n) / static_cast<double>(a.size());
  for (const auto& [key, n] : tb) joint[key].second = static_cast<double>(n) / static_cast<double>(b.size());
  for (const auto& [key, p] : joint) rep.total_variation += 0.5 * std::abs(p.first - p.second);
  const auto test = homogeneity_test(ta, tb);
  rep.chi_square = test.statistic;
  rep.dof = test.dof;
  rep.pvalue = test.pvalue;
  return rep;
}

std::vector<double> scan_continuity(std::span<const Configuration> samples, const Point& center,
                                    std::span<const double> radii, double shell) {
  std::vector<double> flagged;
  for (double r : radii) {
    std::size_t wide = 0, narrow = 0;
    for (const auto& c : samples) {
      bool hit_wide = false, hit_narrow = false;
      for (const auto& p : c.points) {
        const double gap = std::abs(c.space.distance(center, p) - r);
        hit_wide = hit_wide || gap <= shell;
        hit_narrow = hit_narrow || gap <= 0.1 * shell;
      }
      wide += hit_wide;
      narrow += hit_narrow;
    }
    if (narrow >= 5 && 2 * narrow >= wide) flagged.push_back(r);
  }
  return flagged;
}

TightnessReport tightness_check(std::span<const std::vector<Configuration>> ensembles,
                                const Region& ball, double q) {
  TightnessReport rep;
  for (const auto& ens : ensembles) {
    std::vector<double> counts;
    for (const auto& c : ens) counts.push_back(static_cast<double>(count_in(c, ball)));
    rep.quantiles.push_back(counts.empty() ? 0.0 : empirical_quantile(counts, 1.0 - q));
  }
  if (rep.quantiles.empty()) {
    rep.stabilized = true;
    return rep;
  }
  rep.sup = *std::max_element(rep.quantiles.begin(), rep.quantiles.end());
  const std::size_t half = (rep.quantiles.size() + 1) / 2;
  const double first = *std::max_element(rep.quantiles.begin(), rep.quantiles.begin() + static_cast<long>(half));
  rep.stabilized = std::all_of(rep.quantiles.begin() + static_cast<long>(half), rep.quantiles.end(),
                               [&](double v) { return v <= first; });
  return rep;
}

Colouring abert_weiss_colouring(const Configuration& config, int colours, double rho, double cell,
                                std::uint64_t seed) {
  if (colours < 1) throw ConfigurationError("colour count must be positive");
  if (!(rho > 0.0) || !(cell > 0.0)) throw ConfigurationError("locality radius and cell must be positive");
  const auto& space = config.space;
  if (!space.periodic()) throw ConfigurationError("colouring needs a periodic window");
  if (!(rho < space.half_width())) throw ConfigurationError("locality radius must be below half the window");

  const auto nb = neighbours_within(space, config.points, rho);
  std::map<std::vector<std::int64_t>, std::size_t> owner;
  Colouring out;
  out.config = config;
  out.config.marked = true;
  out.colours.resize(config.size());
  for (std::size_t k = 0; k < config.size(); ++k) {
    std::vector<std::array<std::int64_t, 4>> cells;
    for (auto j : nb.of(k)) {
      const Displacement g = space.displacement(config.points[k], config.points[j]);
      cells.push_back({std::llround(g.v[0] / cell), std::llround(g.v[1] / cell), std::llround(g.v[2] / cell),
                       static_cast<std::int64_t>(g.levels)});
    }
    std::sort(cells.begin(), cells.end());
    std::vector<std::int64_t> signature;
    signature.reserve(cells.size() * 4);
    for (const auto& c : cells) signature.insert(signature.end(), c.begin(), c.end());
    const auto [it, inserted] = owner.emplace(signature, k);
    if (!inserted) {
      throw ConfigurationError("points " + std::to_string(it->second) + " and " + std::to_string(k) +
                               " share a local signature: sample is not free at this resolution");
    }
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h ^ static_cast<std::uint64_t>(signature.size()));
    for (auto v : signature) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    const int c = std::min(colours - 1, static_cast<int>(u * colours));
    out.colours[k] = c;
    out.config.points[k].mark = (c + 0.5) / colours;
  }
  return out;
}

}  // namespace ipp
