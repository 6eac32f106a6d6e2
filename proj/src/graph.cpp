#include "ipp/graph.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "ipp/process.hpp"

namespace ipp {
namespace {

void sort_unique(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

Edge ordered(std::uint32_t a, std::uint32_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::array<double, 4> displacement_key(const Space& space, const Point& from, const Point& to) {
  if (!space.periodic()) {
    const Point w = space.recenter(from, to);
    return {w.x[0], w.x[1], 0.0, 0.0};
  }
  const Displacement g = space.displacement(from, to);
  return {g.v[0], g.v[1], g.v[2], static_cast<double>(g.levels)};
}

}  // namespace

void validate(const FactorGraph& graph) {
  std::vector<Edge> seen;
  seen.reserve(graph.edges.size());
  for (const auto& e : graph.edges) {
    if (e.i >= graph.vertex_count || e.j >= graph.vertex_count) throw GraphError("edge index out of range");
    if (e.i == e.j) throw GraphError("self-loop");
    seen.push_back(graph.directed ? e : ordered(e.i, e.j));
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw GraphError("duplicate edge");
}

FactorGraph distance_graph(const Configuration& config, double r) {
  if (!(r > 0.0)) throw GraphError("connection radius must be positive");
  if (config.space.periodic() && !(r < config.space.half_width())) {
    throw GraphError("connection radius must be below half the window side");
  }
  return {config.size(), close_pairs(config.space, config.points, r), false};
}

FactorGraph cayley_graph(const Configuration& config, double spacing,
                         std::span<const std::array<int, 3>> generators) {
  const auto& space = config.space;
  if (!space.periodic() || space.has_levels()) throw GraphError("Cayley graphs need a flat periodic window");
  if (!(spacing > 0.0)) throw GraphError("lattice spacing must be positive");
  FactorGraph g{config.size(), {}, false};
  if (config.empty()) return g;
  const int d = space.dim();
  std::array<long long, 3> cells{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    const double ratio = space.side(a) / spacing;
    cells[static_cast<std::size_t>(a)] = std::llround(ratio);
    if (std::abs(ratio - static_cast<double>(cells[static_cast<std::size_t>(a)])) > 1e-9 * ratio) {
      throw GraphError("window side is not a multiple of the lattice spacing");
    }
  }
  for (const auto& s : generators) {
    const bool has_inverse = std::any_of(generators.begin(), generators.end(), [&](const auto& t) {
      return t[0] == -s[0] && t[1] == -s[1] && t[2] == -s[2];
    });
    if (!has_inverse) throw GraphError("generator set must be symmetric");
  }
  const Point& base = config.points.front();
  std::map<std::array<long long, 3>, std::uint32_t> site;
  std::vector<std::array<long long, 3>> key(config.size());
  for (std::size_t k = 0; k < config.size(); ++k) {
    const Displacement dv = space.displacement(base, config.points[k]);
    std::array<long long, 3> idx{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      const auto i = static_cast<std::size_t>(a);
      const double q = dv.v[i] / spacing;
      const long long r = std::llround(q);
      if (std::abs(q - static_cast<double>(r)) > 1e-6) throw GraphError("configuration is not a lattice orbit");
      idx[i] = ((r % cells[i]) + cells[i]) % cells[i];
    }
    key[k] = idx;
    site[idx] = static_cast<std::uint32_t>(k);
  }
  for (std::size_t k = 0; k < config.size(); ++k) {
    for (const auto& s : generators) {
      std::array<long long, 3> t{};
      for (std::size_t i = 0; i < 3; ++i) t[i] = ((key[k][i] + s[i]) % cells[i] + cells[i]) % cells[i];
      const auto it = site.find(t);
      if (it == site.end() || it->second == k) continue;
      g.edges.push_back(ordered(static_cast<std::uint32_t>(k), it->second));
    }
  }
  sort_unique(g.edges);
  return g;
}

FactorGraph nn_graph(const Configuration& config, std::size_t k) {
  if (k < 1) throw GraphError("k must be at least 1");
  if (config.size() <= k) throw GraphError("too few points for the requested neighbour count");
  const auto& space = config.space;
  const auto n = config.size();
  std::vector<std::vector<Edge>> rows(n);
  const auto nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (long long ii = 0; ii < nn; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::vector<std::pair<double, std::uint32_t>> cand;
    cand.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(space.distance(config.points[i], config.points[j]), static_cast<std::uint32_t>(j));
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(k), cand.end(),
                      [&](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first < b.first;
                        return displacement_key(space, config.points[i], config.points[a.second]) <
                               displacement_key(space, config.points[i], config.points[b.second]);
                      });
    for (std::size_t m = 0; m < k; ++m) rows[i].push_back({static_cast<std::uint32_t>(i), cand[m].second});
  }
  FactorGraph g{n, {}, true};
  for (auto& r : rows) g.edges.insert(g.edges.end(), r.begin(), r.end());
  return g;
}

FactorGraph undirected(const FactorGraph& graph) {
  FactorGraph g{graph.vertex_count, {}, false};
  g.edges.reserve(graph.edges.size());
  for (const auto& e : graph.edges) g.edges.push_back(ordered(e.i, e.j));
  sort_unique(g.edges);
  return g;
}

FactorGraph percolate_edges(const FactorGraph& graph, const Configuration& config, double eps) {
  if (!config.marked) throw GraphError("edge percolation needs a marked configuration");
  if (!(eps >= 0.0 && eps <= 1.0)) throw GraphError("percolation parameter must lie in [0,1]");
  FactorGraph g{graph.vertex_count, {}, graph.directed};
  for (const auto& e : graph.edges) {
    const double s = std::fmod(config.points[e.i].mark + config.points[e.j].mark, 1.0);
    if (s < eps) g.edges.push_back(e);
  }
  return g;
}

FactorGraph vertical_edges(const Configuration& config) {
  const auto& space = config.space;
  if (!space.has_levels()) throw GraphError("vertical edges need a cylinder space");
  const int levels = space.levels();
  FactorGraph g{config.size(), {}, false};
  for (const auto& col : columns(config)) {
    std::vector<std::int64_t> at(static_cast<std::size_t>(levels), -1);
    for (auto k : col) {
      auto& slot = at[static_cast<std::size_t>(config.points[k].level)];
      if (slot >= 0) throw GraphError("column holds two points on one level");
      slot = static_cast<std::int64_t>(k);
    }
    if (std::any_of(at.begin(), at.end(), [](std::int64_t v) { return v < 0; })) {
      throw GraphError("configuration is not vertical: a column misses a level");
    }
    for (int l = 0; l < levels; ++l) {
      const auto a = static_cast<std::uint32_t>(at[static_cast<std::size_t>(l)]);
      const auto b = static_cast<std::uint32_t>(at[static_cast<std::size_t>((l + 1) % levels)]);
      if (a != b) g.edges.push_back(ordered(a, b));
    }
  }
  sort_unique(g.edges);
  return g;
}

FactorGraph lift_graph(const FactorGraph& base, int levels) {
  if (levels < 1) throw GraphError("level count must be positive");
  const auto n = static_cast<std::uint32_t>(base.vertex_count);
  FactorGraph g{base.vertex_count * static_cast<std::size_t>(levels), {}, base.directed};
  g.edges.reserve(base.edges.size() * static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) {
    const auto off = static_cast<std::uint32_t>(l) * n;
    for (const auto& e : base.edges) g.edges.push_back({e.i + off, e.j + off});
  }
  if (!g.directed) sort_unique(g.edges);
  return g;
}

FactorGraph graph_union(const FactorGraph& a, const FactorGraph& b) {
  if (a.vertex_count != b.vertex_count) throw GraphError("graph union needs a common vertex set");
  FactorGraph g{a.vertex_count, a.edges, a.directed && b.directed};
  g.edges.insert(g.edges.end(), b.edges.begin(), b.edges.end());
  if (!g.directed) {
    for (auto& e : g.edges) e = ordered(e.i, e.j);
  }
  sort_unique(g.edges);
  return g;
}

ComponentReport connected_components(const FactorGraph& graph) {
  const auto n = graph.vertex_count;
  std::vector<std::uint32_t> parent(n);
  std::vector<std::uint32_t> size(n, 1);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : graph.edges) {
    auto a = find(e.i), b = find(e.j);
    if (a == b) continue;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
  ComponentReport rep;
  rep.labels.assign(n, 0);
  std::vector<std::int64_t> label_of_root(n, -1);
  std::vector<std::size_t> comp_size;
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = find(static_cast<std::uint32_t>(v));
    if (label_of_root[r] < 0) {
      label_of_root[r] = static_cast<std::int64_t>(comp_size.size());
      comp_size.push_back(0);
    }
    rep.labels[v] = static_cast<std::uint32_t>(label_of_root[r]);
    ++comp_size[rep.labels[v]];
  }
  rep.component_count = comp_size.size();
  rep.largest = comp_size.empty() ? 0 : *std::max_element(comp_size.begin(), comp_size.end());
  rep.connected = rep.component_count <= 1;
  return rep;
}

std::vector<std::size_t> out_degrees(const FactorGraph& graph) {
  std::vector<std::size_t> d(graph.vertex_count, 0);
  for (const auto& e : graph.edges) {
    ++d[e.i];
    if (!graph.directed) ++d[e.j];
  }
  return d;
}

std::vector<std::size_t> in_degrees(const FactorGraph& graph) {
  std::vector<std::size_t> d(graph.vertex_count, 0);
  for (const auto& e : graph.edges) {
    ++d[e.j];
    if (!graph.directed) ++d[e.i];
  }
  return d;
}

std::vector<std::size_t> degrees(const FactorGraph& graph) {
  std::vector<std::size_t> d(graph.vertex_count, 0);
  for (const auto& e : graph.edges) {
    ++d[e.i];
    ++d[e.j];
  }
  return d;
}

DegreeSum degree_sum(const FactorGraph& graph, const Configuration& config, const Region& window) {
  if (graph.vertex_count != config.size()) throw GraphError("graph and configuration sizes differ");
  const auto deg = degrees(graph);
  DegreeSum s;
  for (std::size_t k = 0; k < config.size(); ++k) {
    if (!window.contains(config.space, config.points[k])) continue;
    s.degree_total += static_cast<double>(deg[k]);
    s.points += 1.0;
  }
  return s;
}

EstimateReport degree_stats(std::span<const DegreeSum> per_replica,
                            std::optional<double> intensity, double window_volume) {
  EstimateReport rep;
  rep.name = "mean_degree";
  rep.replicas = per_replica.size();
  if (per_replica.empty()) return rep;
  std::vector<double> num, den;
  for (const auto& s : per_replica) {
    num.push_back(s.degree_total);
    den.push_back(s.points);
  }
  if (intensity) {
    if (*intensity <= 0.0) throw GraphError("degree statistics of a zero-intensity process");
    RunningStats st;
    for (double x : num) st.add(x);
    const double norm = *intensity * window_volume;
    rep.value = st.mean() / norm;
    rep.stderr_ = st.standard_error() / norm;
  } else {
    if (std::accumulate(den.begin(), den.end(), 0.0) == 0.0) {
      throw GraphError("degree statistics of an empty process");
    }
    const auto r = ratio_estimate(num, den);
    rep.value = r.value;
    rep.stderr_ = r.stderr_;
  }
  return rep;
}

}  // namespace ipp
