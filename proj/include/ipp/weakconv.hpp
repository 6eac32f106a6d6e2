#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ipp/configuration.hpp"
#include "ipp/region.hpp"

namespace ipp {

/// Outcome of the (eps, R)-wobble comparison of two configurations.
struct WobbleResult {
  bool feasible = false;
  /// Bottleneck value: a bijection of the R-balls moving every point by at
  /// most eps exists (so an eps'-wobble exists for every eps' > eps).
  double eps = 0.0;
  double radius = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> matching;  ///< indices into a, b

  static std::string csv_header() { return "feasible,eps,R,n_a,n_b"; }
  std::string csv_row() const;
};

/// Restricts both configurations to B(center, R); infeasible with the count
/// witness if the counts differ, otherwise the bottleneck matching value by
/// threshold search with augmenting-path feasibility tests.
WobbleResult wobble_distance(const Configuration& a, const Configuration& b, double radius,
                             const Point& center = Point{});

/// True when a perfect matching of `a` onto `b` with every pair at distance
/// <= threshold exists.
bool matching_within(const Space& space, std::span<const Point> a, std::span<const Point> b,
                     double threshold);

/// Disjoint bounded windows, optionally restricted to a mark interval.
struct FddWindowSet {
  std::vector<Region> windows;
  std::vector<std::optional<std::pair<double, double>>> mark_intervals;

  void add(Region r, std::optional<std::pair<double, double>> marks = std::nullopt) {
    windows.push_back(r);
    mark_intervals.push_back(marks);
  }
  /// Throws unless the windows are pairwise disjoint and inside the window.
  void validate(const Space& space) const;
  std::vector<std::size_t> counts(const Configuration& config) const;
  std::string describe(const Space& space) const;
};

struct FddReport {
  double total_variation = 0.0;
  double chi_square = 0.0;
  double dof = 0.0;
  double pvalue = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::vector<std::size_t> max_count;
  std::string windows;

  static std::string csv_header() { return "tv,chi2,dof,pvalue,n_a,n_b,windows"; }
  std::string csv_row() const;
};

/// Compares the empirical joint laws of (N_V1, ..., N_Vk), counts truncated
/// at `max_count` (default: the 0.999 pooled empirical quantile per window).
FddReport fdd_compare(std::span<const Configuration> a, std::span<const Configuration> b,
                      const FddWindowSet& windows,
                      std::optional<std::vector<std::size_t>> max_count = std::nullopt);

/// Radii whose sphere about `center` is hit with positive probability: hits
/// within `shell` and within `shell`/10 are counted, and r is flagged when
/// narrowing the shell tenfold keeps at least half the hits (and >= 5).
std::vector<double> scan_continuity(std::span<const Configuration> samples, const Point& center,
                                    std::span<const double> radii, double shell = 1e-3);

struct TightnessReport {
  std::vector<double> quantiles;  ///< (1 - q) quantile of N_B per ensemble
  double sup = 0.0;
  bool stabilized = false;  ///< the second half never exceeds the first-half max
};

TightnessReport tightness_check(std::span<const std::vector<Configuration>> ensembles,
                                const Region& ball, double q);

/// A factor colouring: each point's colour is a seeded hash of its local
/// configuration within rho, displacements snapped to a grid of `cell`.
struct Colouring {
  Configuration config;  ///< marked with (colour + 0.5) / colours
  std::vector<int> colours;
};

/// Throws ConfigurationError when two points share a local signature (the
/// sample is not free at this resolution).
Colouring abert_weiss_colouring(const Configuration& config, int colours, double rho, double cell,
                                std::uint64_t seed);

}  // namespace ipp
