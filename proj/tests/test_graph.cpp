#include <gtest/gtest.h>

#include <numeric>
#include <queue>

#include "ipp/graph.hpp"
#include "ipp/process.hpp"

using namespace ipp;

namespace {

// Breadth-first component count, independent of the union-find under test.
std::size_t bfs_components(const FactorGraph& g) {
  std::vector<std::vector<std::uint32_t>> adj(g.vertex_count);
  for (const auto& e : g.edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<char> seen(g.vertex_count, 0);
  std::size_t count = 0;
  for (std::size_t s = 0; s < g.vertex_count; ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
  }
  return count;
}

}  // namespace

TEST(DistanceGraph, MatchesBruteForce) {
  Rng rng(1);
  const Space s = Space::torus(2, 10);
  const Configuration c = sample_poisson(s, 1.0, rng);
  const FactorGraph g = distance_graph(c, 1.3);
  std::size_t brute = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) brute += s.distance(c.points[i], c.points[j]) <= 1.3;
  }
  EXPECT_EQ(g.edge_count(), brute);
  EXPECT_NO_THROW(validate(g));
  EXPECT_THROW(distance_graph(c, 5.5), GraphError);
}

TEST(CayleyGraph, LatticeDegreeFour) {
  Rng rng(2);
  const Configuration c = sample_lattice_shift(Space::torus(2, 16), 1.0, rng);
  std::vector<std::array<int, 3>> gens{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  const FactorGraph g = cayley_graph(c, 1.0, gens);
  EXPECT_EQ(g.edge_count(), 512u);
  for (auto d : degrees(g)) EXPECT_EQ(d, 4u);
  EXPECT_TRUE(connected_components(g).connected);
  std::vector<std::array<int, 3>> asym{{1, 0, 0}};
  EXPECT_THROW(cayley_graph(c, 1.0, asym), GraphError);
}

TEST(NnGraph, OutDegreeK) {
  Rng rng(3);
  const Configuration c = sample_poisson(Space::torus(2, 10), 1.0, rng);
  const FactorGraph g = nn_graph(c, 3);
  EXPECT_TRUE(g.directed);
  for (auto d : out_degrees(g)) EXPECT_EQ(d, 3u);
  const auto in = in_degrees(g);
  EXPECT_EQ(std::accumulate(in.begin(), in.end(), std::size_t{0}), 3 * c.size());
  const FactorGraph u = undirected(g);
  EXPECT_FALSE(u.directed);
  EXPECT_LE(u.edge_count(), g.edge_count());
  EXPECT_GE(u.edge_count(), (g.edge_count() + 1) / 2);
}

TEST(Components, AgreeWithBfs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Configuration c = sample_poisson(Space::torus(2, 10), 1.0, rng);
    const FactorGraph g = distance_graph(c, 0.9);
    const auto rep = connected_components(g);
    EXPECT_EQ(rep.component_count, bfs_components(g));
    EXPECT_EQ(rep.connected, rep.component_count <= 1);
  }
  FactorGraph empty;
  EXPECT_TRUE(connected_components(empty).connected);
}

TEST(Percolation, NestedInEpsAndExtremes) {
  Rng rng(4);
  const Configuration c = iid_mark(sample_poisson(Space::torus(2, 10), 1.0, rng), rng);
  const FactorGraph g = distance_graph(c, 1.5);
  EXPECT_EQ(percolate_edges(g, c, 0.0).edge_count(), 0u);
  EXPECT_EQ(percolate_edges(g, c, 1.0).edge_count(), g.edge_count());
  const auto a = percolate_edges(g, c, 0.2).edges;
  const auto b = percolate_edges(g, c, 0.5).edges;
  EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  Configuration unmarked = c;
  unmarked.marked = false;
  EXPECT_THROW(percolate_edges(g, unmarked, 0.5), GraphError);
}

TEST(Vertical, EdgesLiftAndUnion) {
  Rng rng(5);
  const Configuration base = sample_poisson(Space::torus(1, 20), 1.0, rng);
  const Configuration v = vertical_coupling(base, 6);
  const FactorGraph ve = vertical_edges(v);
  for (auto d : degrees(ve)) EXPECT_EQ(d, 2u);
  EXPECT_EQ(connected_components(ve).component_count, base.size());
  const FactorGraph g = distance_graph(base, 3.0);
  const FactorGraph lifted = lift_graph(g, 6);
  EXPECT_EQ(lifted.edge_count(), 6 * g.edge_count());
  const FactorGraph u = graph_union(ve, lifted);
  EXPECT_EQ(u.edge_count(), ve.edge_count() + lifted.edge_count());
  EXPECT_EQ(connected_components(u).connected, connected_components(g).connected);
  Configuration broken = v;
  broken.points.pop_back();
  EXPECT_THROW(vertical_edges(broken), GraphError);
}

TEST(Degrees, SumsAndStats) {
  Rng rng(6);
  const Configuration c = sample_lattice_shift(Space::torus(2, 8), 1.0, rng);
  std::vector<std::array<int, 3>> gens{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  const FactorGraph g = cayley_graph(c, 1.0, gens);
  const Region w = Region::statistics_window(c.space);
  const DegreeSum d = degree_sum(g, c, w);
  EXPECT_DOUBLE_EQ(d.degree_total, 256.0);
  EXPECT_DOUBLE_EQ(d.points, 64.0);
  std::vector<DegreeSum> sums{d, d};
  EXPECT_DOUBLE_EQ(degree_stats(sums, 1.0, 64.0).value, 4.0);
  EXPECT_DOUBLE_EQ(degree_stats(sums, std::nullopt, 64.0).value, 4.0);
}

TEST(Validate, RejectsMalformedGraphs) {
  FactorGraph g{3, {{0, 0}}, false};
  EXPECT_THROW(validate(g), GraphError);
  g.edges = {{0, 5}};
  EXPECT_THROW(validate(g), GraphError);
  g.edges = {{0, 1}, {0, 1}};
  EXPECT_THROW(validate(g), GraphError);
}
