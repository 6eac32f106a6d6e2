#include "ipp/cost.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ipp/parallel.hpp"
#include "ipp/rng.hpp"

namespace ipp {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double parse_number(std::string_view s, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad " + std::string(what) + ": '" + std::string(s) + "'");
  }
}

struct ReplicaGraphStats {
  DegreeSum sum;
  bool connected = false;
};

CostEstimate summarize(std::string name, std::span<const ReplicaGraphStats> stats,
                       std::optional<double> known_intensity, double window_volume, std::uint64_t seed) {
  CostEstimate est;
  est.graphing = std::move(name);
  est.replicas = stats.size();
  est.seed = seed;
  std::vector<DegreeSum> sums;
  double points = 0.0;
  std::size_t connected = 0;
  for (const auto& s : stats) {
    sums.push_back(s.sum);
    est.replica_degree_totals.push_back(s.sum.degree_total);
    points += s.sum.points;
    connected += s.connected;
  }
  est.connected_fraction = stats.empty() ? 0.0 : static_cast<double>(connected) / static_cast<double>(stats.size());
  est.intensity = known_intensity.value_or(points / (window_volume * static_cast<double>(stats.size())));
  if (!(est.intensity > 0.0)) throw CostError("cost of a zero-intensity process is undefined");
  const auto deg = degree_stats(sums, std::nullopt, window_volume);
  est.mean_degree = deg.value;
  est.mean_degree_stderr = deg.stderr_;
  if (known_intensity) {
    est.cost = 1.0 + est.intensity * (0.5 * est.mean_degree - 1.0);
    est.cost_stderr = est.intensity * 0.5 * est.mean_degree_stderr;
  } else {
    // intensity * (deg/2 - 1) is the mean of (D/2 - N) / |window| per replica.
    RunningStats y;
    for (const auto& s : sums) y.add((0.5 * s.degree_total - s.points) / window_volume);
    est.cost = 1.0 + y.mean();
    est.cost_stderr = y.standard_error();
  }
  return est;
}

}  // namespace

Graphing distance_graphing(double r) {
  return {"dist:" + fmt(r), [r](const Configuration& c) { return distance_graph(c, r); }};
}

Graphing cayley_graphing(double spacing, std::vector<std::array<int, 3>> generators) {
  return {"cayley:" + fmt(spacing),
          [spacing, generators](const Configuration& c) { return cayley_graph(c, spacing, generators); }};
}

Graphing lattice_cayley_graphing(int dim, double spacing) {
  std::vector<std::array<int, 3>> gens;
  for (int a = 0; a < dim; ++a) {
    std::array<int, 3> e{};
    e[static_cast<std::size_t>(a)] = 1;
    gens.push_back(e);
    e[static_cast<std::size_t>(a)] = -1;
    gens.push_back(e);
  }
  return cayley_graphing(spacing, std::move(gens));
}

Graphing knn_graphing(std::size_t k) {
  return {"knn:" + std::to_string(k), [k](const Configuration& c) { return undirected(nn_graph(c, k)); }};
}

Graphing vertical_graphing() {
  return {"vertical", [](const Configuration& c) { return vertical_edges(c); }};
}

Graphing parse_graphing(int dim, std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view family = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (family == "dist") return distance_graphing(parse_number(arg, "graph radius"));
  if (family == "knn") {
    const double k = parse_number(arg, "neighbour count");
    if (k < 1 || k != std::floor(k)) throw std::invalid_argument("knn needs a positive integer k");
    return knn_graphing(static_cast<std::size_t>(k));
  }
  if (family == "cayley") return lattice_cayley_graphing(dim, arg.empty() ? 1.0 : parse_number(arg, "spacing"));
  if (family == "vertical") return vertical_graphing();
  throw std::invalid_argument("unknown graphing '" + std::string(text) + "'");
}

std::string CostEstimate::csv_header() {
  return "graphing,eps,n,levels,replicas,mean_degree,stderr,intensity,cost,cost_stderr,connected_frac,seed";
}

std::string CostEstimate::csv_row() const {
  std::string row = graphing + ",";
  row += (eps ? fmt(*eps) : std::string()) + ",";
  row += (n ? std::to_string(*n) : std::string()) + ",";
  row += (levels ? std::to_string(*levels) : std::string()) + ",";
  row += std::to_string(replicas) + "," + fmt(mean_degree) + "," + fmt(mean_degree_stderr) + "," +
         fmt(intensity) + "," + fmt(cost) + "," + fmt(cost_stderr) + "," + fmt(connected_fraction) + "," +
         std::to_string(seed);
  return row;
}

double lattice_cost(int rank, double covol) {
  if (rank < 1) throw std::invalid_argument("lattice rank must be at least 1");
  if (!(covol > 0.0)) throw std::invalid_argument("covolume must be positive");
  return 1.0 + (rank - 1) / covol;
}

CostEstimate graphing_cost(const ProcessSpec& spec, const Graphing& graphing, std::size_t replicas,
                           std::uint64_t seed) {
  if (replicas == 0) throw std::invalid_argument("at least one replica is required");
  if (spec.intensity && *spec.intensity <= 0.0) throw CostError("cost of a zero-intensity process is undefined");
  const Region window = Region::statistics_window(spec.space);
  const auto stats = map_replicas(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    const Configuration c = spec.sample(rng);
    const FactorGraph g = graphing.build(c);
    return ReplicaGraphStats{degree_sum(g, c, window), connected_components(g).connected};
  });
  return summarize(graphing.name, stats, spec.intensity, window.volume(spec.space), seed);
}

VerticalCostReport vertical_cost_experiment(const ProcessSpec& base, const Graphing& graphing, double eps,
                                            int levels, std::size_t replicas, std::uint64_t seed) {
  if (base.space.kind() != SpaceKind::Torus || base.space.dim() != 1) {
    throw std::invalid_argument("the vertical experiment needs a torus_1 base");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0, 1]");
  if (levels < 3) throw std::invalid_argument("the vertical experiment needs at least three levels");
  if (replicas == 0) throw std::invalid_argument("at least one replica is required");
  const Space cyl = Space::cylinder(base.space.side(0), levels);
  const Region base_window = Region::statistics_window(base.space);
  const Region window = Region::statistics_window(cyl);

  struct Out {
    ReplicaGraphStats base, lifted;
  };
  const auto outs = map_replicas(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    const Configuration b = base.sample(rng);
    const FactorGraph g = graphing.build(b);
    Rng marks = make_stream(seed, r, StreamRole::Marks);
    Configuration stacked = iid_mark(vertical_coupling(b, levels), marks);
    const FactorGraph h =
        graph_union(vertical_edges(stacked), percolate_edges(lift_graph(g, levels), stacked, eps));
    return Out{{degree_sum(g, b, base_window), connected_components(g).connected},
               {degree_sum(h, stacked, window), connected_components(h).connected}};
  });

  std::vector<ReplicaGraphStats> base_stats, lifted_stats;
  for (const auto& o : outs) {
    base_stats.push_back(o.base);
    lifted_stats.push_back(o.lifted);
  }
  const CostEstimate base_est = summarize(graphing.name, base_stats, base.intensity,
                                          base_window.volume(base.space), seed);
  VerticalCostReport rep;
  rep.base_connected_fraction = base_est.connected_fraction;
  if (rep.base_connected_fraction < 0.5) {
    throw CostError("base graphing " + graphing.name + " connected in only " +
                    fmt(100.0 * rep.base_connected_fraction) + "% of replicas (need >= 50%)");
  }
  rep.base_degree.name = "base_mean_degree";
  rep.base_degree.value = base_est.mean_degree;
  rep.base_degree.stderr_ = base_est.mean_degree_stderr;
  rep.base_degree.replicas = replicas;
  rep.base_degree.seed = seed;
  rep.base_degree.window = base_window.describe(base.space);
  rep.estimate = summarize("vertical+" + graphing.name, lifted_stats, base.intensity, window.volume(cyl), seed);
  rep.estimate.eps = eps;
  rep.estimate.levels = levels;
  rep.predicted_cost = 1.0 + base_est.intensity * eps * 0.5 * base_est.mean_degree;
  return rep;
}

std::string GxzRow::csv_header() {
  return "n,bound,successor,successor_stderr,strip_chi2,strip_dof,strip_p,wobble_feasible,wobble_eps_mean,"
         "fdd_tv,fdd_p,stacked_tv,stacked_p";
}

std::string GxzRow::csv_row() const {
  return std::to_string(n) + "," + fmt(bound) + "," + fmt(successor) + "," + fmt(successor_stderr) + "," +
         fmt(strip_gof.statistic) + "," + fmt(strip_gof.dof) + "," + fmt(strip_gof.pvalue) + "," +
         fmt(wobble_feasible) + "," + fmt(wobble_eps_mean) + "," + fmt(fdd.total_variation) + "," +
         fmt(fdd.pvalue) + "," + fmt(fdd_stacked.total_variation) + "," + fmt(fdd_stacked.pvalue);
}

FddWindowSet gxz_windows(const Space& cyl) {
  if (!cyl.has_levels()) throw std::invalid_argument("cylinder windows need a cylinder space");
  const double side = cyl.side(0);
  const int levels = cyl.levels();
  FddWindowSet w;
  const double u = side / 20.0;
  w.add(Region::box({0.0, 0, 0}, {u, 0, 0}, 0, 0));
  w.add(Region::box({3 * u, 0, 0}, {4 * u, 0, 0}, 0, 0));
  w.add(Region::box({6 * u, 0, 0}, {7.5 * u, 0, 0}, std::min(1, levels - 1), std::min(1, levels - 1)));
  w.add(Region::box({10 * u, 0, 0}, {11 * u, 0, 0}, std::min(7, levels - 1), std::min(7, levels - 1)));
  return w;
}

FddWindowSet gxz_stacked_windows(const Space& cyl) {
  if (!cyl.has_levels()) throw std::invalid_argument("cylinder windows need a cylinder space");
  const double u = cyl.side(0) / 20.0;
  FddWindowSet w;
  w.add(Region::box({14 * u, 0, 0}, {16 * u, 0, 0}, 0, 0));
  w.add(Region::box({14 * u, 0, 0}, {16 * u, 0, 0}, 1, 1));
  return w;
}

namespace {

/// Fraction numerator/denominator of points with a point within `eps` in
/// base distance one level up.
std::pair<double, double> successor_counts(const Configuration& c, double eps) {
  const int levels = c.space.levels();
  const double side = c.space.side(0);
  std::vector<std::vector<double>> by_level(static_cast<std::size_t>(levels));
  for (const auto& p : c.points) by_level[static_cast<std::size_t>(p.level)].push_back(p.x[0]);
  for (auto& v : by_level) std::sort(v.begin(), v.end());
  double hits = 0.0;
  for (const auto& p : c.points) {
    const auto& up = by_level[static_cast<std::size_t>((p.level + 1) % levels)];
    bool found = false;
    for (double shift : {0.0, side, -side}) {
      const double x = p.x[0] + shift;
      auto it = std::lower_bound(up.begin(), up.end(), x - eps);
      if (it != up.end() && *it <= x + eps) {
        found = true;
        break;
      }
    }
    hits += found;
  }
  return {hits, static_cast<double>(c.size())};
}

}  // namespace

std::vector<GxzRow> gxz_convergence_experiment(const GxzParams& params) {
  if (params.replicas == 0) throw std::invalid_argument("at least one replica is required");
  if (!(params.t > 0.0)) throw std::invalid_argument("intensity must be positive");
  for (int n : params.ns) {
    if (n < 1 || 2 * n > params.levels) {
      throw std::invalid_argument("n = " + std::to_string(n) + " exceeds half the level window");
    }
  }
  const Space cyl = Space::cylinder(params.side, params.levels);
  const FddWindowSet windows = gxz_windows(cyl);
  const FddWindowSet stacked = gxz_stacked_windows(cyl);
  auto keep_window_points = [&](const Configuration& c) {
    Configuration out = c;
    out.provenance = {};
    std::erase_if(out.points, [&](const Point& p) {
      for (const auto& w : windows.windows) {
        if (w.contains(c.space, p)) return false;
      }
      for (const auto& w : stacked.windows) {
        if (w.contains(c.space, p)) return false;
      }
      return true;
    });
    return out;
  };
  const ProcessSpec iid = iid_poisson_process(cyl, params.t);
  const ProcessSpec vertical = vertical_poisson_process(cyl, params.t);
  const std::vector<Configuration> reference = map_replicas(params.replicas, [&](std::size_t r) {
    Rng rng = make_stream(params.seed, r, StreamRole::ArmB);
    return keep_window_points(vertical.sample(rng));
  });

  struct PerN {
    double succ_hits = 0.0, succ_points = 0.0;
    std::size_t strip = 0;
    bool wobble_ok = false;
    double wobble_eps = 0.0;
    Configuration kept;
  };
  const auto per_replica = map_replicas(params.replicas, [&](std::size_t r) {
    Rng rng = make_stream(params.seed, r, StreamRole::Base);
    const Configuration base = iid.sample(rng);
    std::vector<PerN> out;
    for (int n : params.ns) {
      const Configuration phi = straighten_phi_n(base, n);
      PerN s;
      std::tie(s.succ_hits, s.succ_points) = successor_counts(phi, params.successor_eps);
      Configuration slice;
      slice.space = Space::torus(1, params.side);
      for (const auto& p : phi.points) {
        if (p.level == 0) {
          ++s.strip;
          slice.points.push_back(Point{{p.x[0], 0, 0}, 0, 0.0});
        }
      }
      const auto w = wobble_distance(phi, vertical_coupling(slice, params.levels), params.wobble_radius);
      s.wobble_ok = w.feasible;
      s.wobble_eps = w.feasible ? w.eps : 0.0;
      s.kept = keep_window_points(phi);
      out.push_back(std::move(s));
    }
    return out;
  });

  std::vector<GxzRow> rows;
  for (std::size_t k = 0; k < params.ns.size(); ++k) {
    GxzRow row;
    row.n = params.ns[k];
    row.bound = static_cast<double>(row.n - 1) / row.n;
    std::vector<double> num, den;
    std::vector<std::size_t> strips;
    std::vector<Configuration> samples;
    RunningStats wob;
    std::size_t feasible = 0;
    for (const auto& rep : per_replica) {
      const auto& s = rep[k];
      num.push_back(s.succ_hits);
      den.push_back(s.succ_points);
      strips.push_back(s.strip);
      feasible += s.wobble_ok;
      if (s.wobble_ok) wob.add(s.wobble_eps);
      samples.push_back(s.kept);
    }
    const auto succ = ratio_estimate(num, den);
    row.successor = succ.value;
    row.successor_stderr = succ.stderr_;
    row.strip_gof = poisson_gof(strips, params.t * params.side);
    row.wobble_feasible = static_cast<double>(feasible) / static_cast<double>(params.replicas);
    row.wobble_eps_mean = wob.mean();
    row.fdd = fdd_compare(samples, reference, windows);
    row.fdd_stacked = fdd_compare(samples, reference, stacked);
    rows.push_back(std::move(row));
  }
  return rows;
}

MonotonicityReport monotonicity_spotcheck(const ProcessSpec& source, const ProcessSpec& factor,
                                          std::span<const Graphing> source_graphings,
                                          std::span<const Graphing> factor_graphings,
                                          std::size_t replicas, std::uint64_t seed) {
  if (source_graphings.empty() || factor_graphings.empty()) {
    throw std::invalid_argument("each side needs at least one graphing");
  }
  MonotonicityReport rep;
  for (const auto& g : source_graphings) rep.source.push_back(graphing_cost(source, g, replicas, seed));
  for (const auto& g : factor_graphings) rep.factor.push_back(graphing_cost(factor, g, replicas, seed));
  auto best = [](const std::vector<CostEstimate>& v) {
    return *std::min_element(v.begin(), v.end(),
                             [](const CostEstimate& a, const CostEstimate& b) { return a.cost < b.cost; });
  };
  const auto bs = best(rep.source);
  const auto bf = best(rep.factor);
  rep.best_source = bs.cost;
  rep.best_factor = bf.cost;
  const double se = std::hypot(bs.cost_stderr, bf.cost_stderr);
  const double diff = bs.cost - bf.cost;
  rep.z = se > 0.0 ? diff / se : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  rep.warning = rep.z > 3.0;
  rep.message = rep.warning ? "WARNING: source bound " + fmt(bs.cost) + " (" + bs.graphing +
                                  ") exceeds factor bound " + fmt(bf.cost) + " (" + bf.graphing + ") by " +
                                  fmt(rep.z) + " sigma; bounds are not infima"
                            : "source bound " + fmt(bs.cost) + ", factor bound " + fmt(bf.cost);
  return rep;
}

}  // namespace ipp
