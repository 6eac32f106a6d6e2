#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ipp/configuration.hpp"
#include "ipp/neighbours.hpp"
#include "ipp/region.hpp"
#include "ipp/stats.hpp"

namespace ipp {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Edge = IndexPair;

/// A graph on the points of a configuration. Undirected graphs store each
/// edge once with i < j; directed graphs store (source, target).
struct FactorGraph {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;
  bool directed = false;

  std::size_t edge_count() const { return edges.size(); }
};

struct ComponentReport {
  std::size_t component_count = 0;
  std::size_t largest = 0;
  bool connected = true;
  std::vector<std::uint32_t> labels;
};

/// Throws GraphError on out-of-range indices, self-loops or duplicates.
void validate(const FactorGraph& graph);

/// Edge between every pair at distance <= r.
FactorGraph distance_graph(const Configuration& config, double r);

/// Cayley factor graph of a lattice-shift configuration: g -- g + s*spacing
/// for every generator s (in lattice units). Generators must be symmetric.
FactorGraph cayley_graph(const Configuration& config, double spacing,
                         std::span<const std::array<int, 3>> generators);

/// Directed edges from each point to its k nearest others; distance ties are
/// broken as in voronoi_assign.
FactorGraph nn_graph(const Configuration& config, std::size_t k);

/// Undirected closure of a directed graph (duplicates merged).
FactorGraph undirected(const FactorGraph& graph);

/// Keeps edge {g, h} iff (mark_g + mark_h) mod 1 < eps.
FactorGraph percolate_edges(const FactorGraph& graph, const Configuration& config, double eps);

/// Vertical edges (g, l) -- (g, l + 1 mod levels) of a column-closed
/// cylinder configuration.
FactorGraph vertical_edges(const Configuration& config);

/// Copies a base graph onto every level of a vertical coupling (level-major
/// vertex order as produced by vertical_coupling).
FactorGraph lift_graph(const FactorGraph& base, int levels);

/// Edge union of two graphs on the same vertex set.
FactorGraph graph_union(const FactorGraph& a, const FactorGraph& b);

ComponentReport connected_components(const FactorGraph& graph);

/// Per-vertex degree (in + out for directed graphs).
std::vector<std::size_t> degrees(const FactorGraph& graph);
std::vector<std::size_t> out_degrees(const FactorGraph& graph);
std::vector<std::size_t> in_degrees(const FactorGraph& graph);

/// Sum of degrees over points in `window` and the number of such points;
/// the per-realization ingredients of the mean Palm degree.
struct DegreeSum {
  double degree_total = 0.0;
  double points = 0.0;
};
DegreeSum degree_sum(const FactorGraph& graph, const Configuration& config, const Region& window);

/// Mean Palm degree from per-replica degree sums: divided by
/// intensity * |window| when the intensity is known, else the ratio
/// estimator over replicas.
EstimateReport degree_stats(std::span<const DegreeSum> per_replica,
                            std::optional<double> intensity, double window_volume);

}  // namespace ipp
