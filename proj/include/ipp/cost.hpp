#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipp/graph.hpp"
#include "ipp/process.hpp"
#include "ipp/stats.hpp"
#include "ipp/weakconv.hpp"

namespace ipp {

class CostError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named factor-graph rule.
struct Graphing {
  std::string name;
  std::function<FactorGraph(const Configuration&)> build;
};

Graphing distance_graphing(double r);
Graphing cayley_graphing(double spacing, std::vector<std::array<int, 3>> generators);
/// Standard generators +-e_i of Z^d.
Graphing lattice_cayley_graphing(int dim, double spacing);
Graphing knn_graphing(std::size_t k);
Graphing vertical_graphing();
/// `dist:R`, `knn:k`, `cayley:spacing`, `vertical`.
Graphing parse_graphing(int dim, std::string_view text);

/// An upper bound on cost attached to one graphing family.
struct CostEstimate {
  std::string graphing;
  std::optional<double> eps;
  std::optional<int> n;
  std::optional<int> levels;
  std::size_t replicas = 0;
  double mean_degree = 0.0;
  double mean_degree_stderr = 0.0;
  double intensity = 0.0;
  double cost = 0.0;
  double cost_stderr = 0.0;
  double connected_fraction = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> replica_degree_totals;

  static std::string csv_header();
  std::string csv_row() const;
};

double lattice_cost(int rank, double covol);

/// Palm mean degree of `graphing` on samples of `spec` (ratio of degree
/// and point totals over replicas), its connectivity rate and
/// cost = 1 + intensity * (mean degree / 2 - 1).
CostEstimate graphing_cost(const ProcessSpec& spec, const Graphing& graphing, std::size_t replicas,
                           std::uint64_t seed);

struct VerticalCostReport {
  CostEstimate estimate;
  EstimateReport base_degree;
  double base_connected_fraction = 0.0;
  /// 1 + intensity * eps * (base mean degree) / 2.
  double predicted_cost = 0.0;
};

/// Vertical coupling of a torus_1 sample over `levels` levels with IID
/// marks, graph = vertical edges plus the eps-percolated lift of the base
/// graphing. Marks depend only on (seed, replica), so runs at different eps
/// share them. Throws CostError if the base graphing is connected in fewer
/// than half of the replicas.
VerticalCostReport vertical_cost_experiment(const ProcessSpec& base, const Graphing& graphing, double eps,
                                            int levels, std::size_t replicas, std::uint64_t seed);

struct GxzParams {
  double t = 1.0;
  std::vector<int> ns{2, 5, 10, 20};
  double side = 20.0;
  int levels = 40;
  std::size_t replicas = 2000;
  std::uint64_t seed = 0;
  double successor_eps = 0.05;
  double wobble_radius = 2.0;
};

struct GxzRow {
  int n = 0;
  double bound = 0.0;  ///< (n - 1) / n
  double successor = 0.0;
  double successor_stderr = 0.0;
  TestResult strip_gof;
  double wobble_feasible = 0.0;
  double wobble_eps_mean = 0.0;
  FddReport fdd;
  FddReport fdd_stacked;

  static std::string csv_header();
  std::string csv_row() const;
};

/// Windows at pairwise distinct base intervals spread over several levels.
FddWindowSet gxz_windows(const Space& cylinder);
/// Two windows over the same base interval on adjacent levels.
FddWindowSet gxz_stacked_windows(const Space& cylinder);

/// Straightening diagnostics per n on a shared IID Poisson sample per
/// replica: successor rate, single-level count law, wobble distance to the
/// vertical coupling of its level-0 slice, and fdd comparisons against an
/// independent vertical Poisson arm.
std::vector<GxzRow> gxz_convergence_experiment(const GxzParams& params);

struct MonotonicityReport {
  std::vector<CostEstimate> source;
  std::vector<CostEstimate> factor;
  double best_source = 0.0;
  double best_factor = 0.0;
  double z = 0.0;
  bool warning = false;
  std::string message;
};

/// Cost upper bounds for a process and a factor of it on shared seeds
/// (`factor` must sample by transforming the draw of `source`).
MonotonicityReport monotonicity_spotcheck(const ProcessSpec& source, const ProcessSpec& factor,
                                          std::span<const Graphing> source_graphings,
                                          std::span<const Graphing> factor_graphings,
                                          std::size_t replicas, std::uint64_t seed);

}  // namespace ipp
