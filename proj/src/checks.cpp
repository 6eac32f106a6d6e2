#include "ipp/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ipp/encoding.hpp"
#include "ipp/graph.hpp"
#include "ipp/parallel.hpp"
#include "ipp/stats.hpp"
#include "ipp/weakconv.hpp"

namespace ipp {

double CheckReport::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw std::out_of_range("no metric '" + key + "' in " + name);
}

std::string CheckReport::csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "check,metric,value\n";
  for (const auto& [k, v] : metrics) os << name << ',' << k << ',' << v << '\n';
  os << name << ",passed," << (passed ? 1 : 0) << '\n';
  return os.str();
}

CheckReport poisson_law_check(const Space& space, double t, std::size_t replicas, std::uint64_t seed,
                              double alpha) {
  if (replicas < 2) throw std::invalid_argument("the Poisson law check needs at least two replicas");
  const ProcessSpec spec = poisson_process(space, t);
  const double half = 0.5 * space.side(0);
  struct Counts {
    std::size_t total, left, right;
  };
  const auto counts = map_replicas(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    const Configuration c = spec.sample(rng);
    Counts k{c.size(), 0, 0};
    for (const auto& p : c.points) (p.x[0] < half ? k.left : k.right)++;
    return k;
  });
  std::vector<std::size_t> totals;
  std::vector<double> left, right;
  RunningStats st;
  for (const auto& k : counts) {
    totals.push_back(k.total);
    left.push_back(static_cast<double>(k.left));
    right.push_back(static_cast<double>(k.right));
    st.add(static_cast<double>(k.total));
  }
  const double expected = t * space.volume();
  const double se = std::sqrt(expected / static_cast<double>(replicas));
  const double z = se > 0.0 ? (st.mean() - expected) / se : 0.0;
  const auto gof = poisson_gof(totals, expected);
  const double rho = pearson_correlation(left, right);
  CheckReport rep;
  rep.name = "poisson_law";
  rep.metrics = {{"expected_mean", expected}, {"mean", st.mean()},   {"mean_z", z},
                 {"gof_chi2", gof.statistic}, {"gof_dof", gof.dof},  {"gof_p", gof.pvalue},
                 {"half_window_correlation", rho}};
  rep.passed = std::abs(z) < 3.0 && gof.pvalue > alpha && std::abs(rho) < 0.05;
  return rep;
}

CheckReport thinning_law_check(const Space& space, double t, double p, std::size_t replicas,
                               std::uint64_t seed, double alpha) {
  const ProcessSpec spec = iid_poisson_process(space, t);
  const auto counts = map_replicas(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    return p_thin(spec.sample(rng), p).size();
  });
  const double expected = p * t * space.volume();
  const auto gof = poisson_gof(counts, expected);
  RunningStats st;
  for (auto c : counts) st.add(static_cast<double>(c));
  CheckReport rep;
  rep.name = "thinning_law";
  rep.metrics = {{"p", p}, {"expected_mean", expected}, {"mean", st.mean()}, {"gof_chi2", gof.statistic},
                 {"gof_dof", gof.dof}, {"gof_p", gof.pvalue}};
  rep.passed = gof.pvalue > alpha;
  return rep;
}

CheckReport thickening_count_check(const Space& space, double t, std::span<const Displacement> offsets,
                                   std::size_t runs, std::uint64_t seed) {
  const ProcessSpec spec = poisson_process(space, t);
  const std::vector<Displacement> f(offsets.begin(), offsets.end());
  const auto mismatch = map_replicas(runs, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    const Configuration c = spec.sample(rng);
    const Configuration out = constant_thicken(c, f);
    return out.size() == f.size() * c.size() ? 0 : 1;
  });
  const auto bad = std::count(mismatch.begin(), mismatch.end(), 1);
  CheckReport rep;
  rep.name = "thickening_count";
  rep.metrics = {{"runs", static_cast<double>(runs)}, {"offsets", static_cast<double>(f.size())},
                 {"mismatches", static_cast<double>(bad)}};
  rep.passed = bad == 0;
  return rep;
}

CheckReport percolation_law_check(const Space& space, double t, double r, std::span<const double> eps,
                                  std::size_t min_edges, std::uint64_t seed) {
  if (eps.empty()) throw std::invalid_argument("at least one eps is required");
  std::vector<double> levels(eps.begin(), eps.end());
  std::sort(levels.begin(), levels.end());
  const ProcessSpec spec = iid_poisson_process(space, t);
  std::size_t edges = 0;
  std::vector<double> kept(levels.size(), 0.0);
  bool nested = true;
  for (std::size_t rep_index = 0; edges < min_edges; ++rep_index) {
    Rng rng = make_stream(seed, rep_index, StreamRole::Base);
    const Configuration c = spec.sample(rng);
    const FactorGraph g = distance_graph(c, r);
    edges += g.edge_count();
    std::vector<Edge> previous;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const FactorGraph h = percolate_edges(g, c, levels[k]);
      kept[k] += static_cast<double>(h.edge_count());
      nested = nested && std::includes(h.edges.begin(), h.edges.end(), previous.begin(), previous.end());
      previous = h.edges;
    }
    if (rep_index > 100000) throw std::invalid_argument("percolation check: graphs have too few edges");
  }
  CheckReport rep;
  rep.name = "percolation_law";
  rep.passed = nested;
  rep.metrics.emplace_back("edges", static_cast<double>(edges));
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double frac = kept[k] / static_cast<double>(edges);
    const double sigma = std::sqrt(levels[k] * (1.0 - levels[k]) / static_cast<double>(edges));
    const double z = sigma > 0.0 ? (frac - levels[k]) / sigma : (frac == levels[k] ? 0.0 : 1e300);
    rep.metrics.emplace_back("survival@" + std::to_string(levels[k]), frac);
    rep.metrics.emplace_back("z@" + std::to_string(levels[k]), z);
    rep.passed = rep.passed && std::abs(z) <= 3.0;
  }
  rep.metrics.emplace_back("nested", nested ? 1.0 : 0.0);
  return rep;
}

CheckReport encoding_roundtrip_check(const Space& space, double t, double delta, std::size_t runs,
                                     std::uint64_t seed) {
  const ProcessSpec spec = poisson_process(space, t);
  struct Outcome {
    bool exact;
    std::size_t points;
  };
  const auto outcomes = map_replicas(runs, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    Configuration c = delta_thin(spec.sample(rng), delta);
    Rng marks = make_stream(seed, r, StreamRole::Marks);
    c = iid_mark(std::move(c), marks);
    for (auto& p : c.points) p.mark = dequantize_mark(quantize_mark(p.mark));
    const Configuration back = decode_marks(encode_marks(c, delta), delta);
    return Outcome{back.marked && back.points == c.points, c.size()};
  });
  std::size_t bad = 0, points = 0;
  for (const auto& o : outcomes) {
    bad += !o.exact;
    points += o.points;
  }
  CheckReport rep;
  rep.name = "encoding_roundtrip";
  rep.metrics = {{"runs", static_cast<double>(runs)}, {"points", static_cast<double>(points)},
                 {"mismatches", static_cast<double>(bad)}};
  rep.passed = bad == 0;
  return rep;
}

CheckReport colouring_law_check(const Space& space, double t, int colours, double rho, std::size_t samples,
                                std::uint64_t seed, double alpha) {
  if (colours < 2) throw ConfigurationError("colouring needs at least two colours");
  Point far;
  for (int a = 0; a < space.dim(); ++a) far.x[static_cast<std::size_t>(a)] = 0.5 * space.side(a);
  auto nearest = [&](const Configuration& c, const Point& q) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < c.size(); ++k) {
      if (space.distance(q, c.points[k]) < space.distance(q, c.points[best])) best = k;
    }
    return best;
  };
  struct Pair {
    int a = -1, b = -1;
  };
  const auto pairs = map_replicas(samples, [&](std::size_t r) {
    Rng rng = make_stream(seed, r, StreamRole::Base);
    const Configuration c = sample_poisson(space, t, rng);
    if (c.size() < 2) return Pair{};
    const auto col = abert_weiss_colouring(c, colours, rho, 1e-6, seed);
    const auto i = nearest(c, Point{});
    const auto j = nearest(c, far);
    if (space.distance(c.points[i], c.points[j]) <= 2.0 * rho) return Pair{};
    return Pair{col.colours[i], col.colours[j]};
  });
  const auto k = static_cast<std::size_t>(colours);
  std::vector<std::size_t> marginal(k, 0);
  std::vector<std::vector<std::size_t>> joint(k, std::vector<std::size_t>(k, 0));
  std::size_t used = 0;
  for (const auto& p : pairs) {
    if (p.a < 0) continue;
    ++used;
    ++marginal[static_cast<std::size_t>(p.a)];
    ++joint[static_cast<std::size_t>(p.a)][static_cast<std::size_t>(p.b)];
  }
  CheckReport rep;
  rep.name = "colouring";
  if (used == 0) {
    rep.metrics = {{"pairs", 0.0}};
    return rep;
  }
  const auto uni = uniform_gof(marginal);
  const auto ind = independence_test(joint);
  Rng rng = make_stream(seed, 0, StreamRole::Base);
  const Configuration c = sample_poisson(space, t, rng);
  const bool reproducible = !c.empty() && abert_weiss_colouring(c, colours, rho, 1e-6, seed).colours ==
                                              abert_weiss_colouring(c, colours, rho, 1e-6, seed).colours;
  rep.metrics = {{"pairs", static_cast<double>(used)},
                 {"marginal_p", uni.pvalue},
                 {"independence_p", ind.pvalue},
                 {"freq0", static_cast<double>(marginal[0]) / static_cast<double>(used)},
                 {"reproducible", reproducible ? 1.0 : 0.0}};
  rep.passed = uni.pvalue > alpha && ind.pvalue > alpha && reproducible &&
               static_cast<double>(used) >= 0.98 * static_cast<double>(samples);
  return rep;
}

}  // namespace ipp
