#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipp/configuration.hpp"
#include "ipp/process.hpp"
#include "ipp/region.hpp"
#include "ipp/stats.hpp"

namespace ipp {

/// A configuration seen from one of its points: everything is moved by the
/// isometry taking the root to the origin. Local samples keep only the
/// points within some radius of the root.
struct RootedSample {
  Configuration config;
  std::size_t origin_index = 0;        ///< the root's index within `config`
  std::size_t root_index = 0;          ///< the root's index in the source
  Point root{};                        ///< the root's original coordinates
  std::vector<std::uint32_t> ids;      ///< source index of each point
};

using Statistic = std::function<double(const RootedSample&)>;

/// A nonnegative function of a rooted configuration that ignores
/// everything farther than `range` from the origin.
struct Functional {
  std::string name;
  Statistic eval;
  double range = std::numeric_limits<double>::infinity();
};

/// The full configuration rerooted at point `root`.
RootedSample reroot(const Configuration& config, std::size_t root);
/// Rerooted at `root`, keeping only the root and `neighbours`.
RootedSample reroot_local(const Configuration& config, std::size_t root,
                          std::span<const std::uint32_t> neighbours);

/// One rooted sample for every point of `config` inside `window`.
std::vector<RootedSample> palm_reroot(const Configuration& config, const Region& window);

/// Distance from the root to the nearest other point; +inf beyond range.
Functional nearest_neighbour_distance(double range);
/// Number of other points within `radius` of the root.
Functional count_in_ball(double radius, double cap = std::numeric_limits<double>::infinity());
/// 1 when no other point lies within `radius` of the root.
Functional empty_ball_indicator(double radius);
Functional constant_one();

/// (1 / (intensity * |U|)) * mean over replicas of sum_{x in U} h(x^-1 Pi),
/// using the known intensity when the process has one and the ratio
/// estimator sum h / sum count otherwise.
EstimateReport estimate_palm_expectation(const ProcessSpec& spec, const Functional& h,
                                         std::size_t replicas, std::uint64_t seed,
                                         std::optional<Region> window = std::nullopt);

/// An exact draw from the Palm distribution restricted to `window`:
/// configurations are accepted with probability proportional to their
/// point count in the window, then a uniform root is chosen.
RootedSample sample_palm_root(const ProcessSpec& spec, const Region& window, double range,
                              Rng& rng);

/// One CSV row `verifier,statistic,n,lhs,rhs,stderr,pvalue,seed`.
struct VerifierReport {
  std::string verifier;
  std::string statistic;
  std::size_t n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double stderr_ = 0.0;
  double pvalue = 1.0;
  std::uint64_t seed = 0;
  bool passed = false;

  static std::string csv_header();
  std::string csv_row() const;
};

/// Two-sample KS between a statistic under the Palm version of Poisson(t)
/// and under Poisson(t) with the origin adjoined.
VerifierReport verify_mecke_slivnyak(double t, const Space& space, const Functional& statistic,
                                     std::size_t samples_per_arm, std::uint64_t seed,
                                     double alpha = 0.01);

/// f(x, omega) for the refined Campbell identity. When `weight` and
/// `statistic` are set, f is their product and the x-integral is taken once.
struct TwoPointFunctional {
  std::string name;
  std::function<double(const Point& x, const RootedSample& omega)> eval;
  double range = std::numeric_limits<double>::infinity();
  std::function<double(const Point&)> weight;
  Statistic statistic;
};

TwoPointFunctional product_functional(std::string name, std::function<double(const Point&)> weight,
                                      const Functional& statistic);

/// Indicator of the lower half window [0, side/2) on every real axis (all
/// levels on cylinders) times the ball count of radius `radius` capped at `cap`.
TwoPointFunctional window_ball_count_functional(const Space& space, double radius, double cap);

/// LHS = E[sum_x f(x, x^-1 Pi)] and RHS = intensity * E_0[int f(x, .) dx],
/// each from independent replicas; passes when |LHS - RHS| < 3 combined
/// standard errors. `quadrature_cells` per axis is used for non-product f.
VerifierReport verify_clmm(const ProcessSpec& spec, const TwoPointFunctional& f,
                           std::size_t replicas, std::uint64_t seed,
                           int quadrature_cells = 32);

/// T(x, y; omega) evaluated on a local view: `src`, `dst` index points of
/// `view.config`. Must depend only on relative positions (and labels).
struct Transport {
  std::string name;
  std::function<double(const RootedSample& view, std::size_t src, std::size_t dst)> eval;
  double range = 0.0;  ///< T vanishes beyond this distance
};

Transport ball_transport(double radius);
Transport nearest_neighbour_transport(double range);
/// 1 when src is the progenitor copy of dst's parent (needs provenance).
Transport spawn_transport(double range);

struct MtpReport {
  std::string transport;
  std::size_t replicas = 0;
  double mean_out = 0.0;        ///< Palm mean mass sent by the root
  double mean_in = 0.0;         ///< Palm mean mass received by the root
  double stderr_ = 0.0;
  double max_relative_error = 0.0;  ///< per-realization |out - in| / out
  double progenitor_out = 0.0;      ///< mean mass sent among progenitors
  double pvalue = 1.0;
  bool exact = false;  ///< per-realization comparison (periodic window)
  bool passed = false;
};

/// Mass transport check. On tori the out- and in-totals are computed from
/// separate rerootings per realization and must agree to `rel_tol`; on the
/// free-boundary disk the Palm means are compared within 3 standard errors.
MtpReport verify_mtp(const ProcessSpec& spec, const Transport& t, std::size_t replicas,
                     std::uint64_t seed, double rel_tol = 1e-9);

/// Two-sample KS between the Palm version of a constant thickening and the
/// thickening of the Mecke-Slivnyak Palm version of a Poisson base, rerooted
/// at a uniformly chosen copy of the origin.
VerifierReport verify_palm_of_thickening(const ProcessSpec& poisson_base,
                                         std::span<const Displacement> offsets,
                                         const Functional& statistic, std::size_t samples_per_arm,
                                         std::uint64_t seed, double alpha = 0.01);

}  // namespace ipp
