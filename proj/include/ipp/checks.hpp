#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ipp/process.hpp"

namespace ipp {

/// Outcome of a seeded law check: named metrics plus a pass flag.
struct CheckReport {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& key) const;
  /// `name,metric,value` lines.
  std::string csv() const;
};

/// Counts of Poisson(t) over the whole window: mean within 3 standard
/// errors of t * volume, Pearson GOF p > alpha, and |correlation| < 0.05
/// between the counts of the two half windows along axis 0.
CheckReport poisson_law_check(const Space& space, double t, std::size_t replicas, std::uint64_t seed,
                              double alpha = 0.01);

/// p_thin(p) of IID-marked Poisson(t): GOF against Poisson(p * t * volume).
CheckReport thinning_law_check(const Space& space, double t, double p, std::size_t replicas,
                               std::uint64_t seed, double alpha = 0.01);

/// |constant_thicken(Pi, F)| == |F| * |Pi| on every run.
CheckReport thickening_count_check(const Space& space, double t, std::span<const Displacement> offsets,
                                   std::size_t runs, std::uint64_t seed);

/// Edge survival of eps-percolation on distance-r graphs of IID-marked
/// Poisson(t): survival fraction within 3 binomial sigma of eps (over at
/// least `min_edges` edges) for every eps, and kept edge sets nested in
/// eps on shared marks.
CheckReport percolation_law_check(const Space& space, double t, double r, std::span<const double> eps,
                                  std::size_t min_edges, std::uint64_t seed);

/// decode(encode(c)) == c bit for bit on delta-separated Poisson samples
/// with marks on the 16-bit grid.
CheckReport encoding_roundtrip_check(const Space& space, double t, double delta, std::size_t runs,
                                     std::uint64_t seed);

/// Factor colouring of Poisson(t) on a periodic window: colours of the
/// points nearest the origin and nearest the window centre are uniform
/// (GOF p > alpha) and independent (contingency p > alpha) over samples
/// where the two points are more than 2 * rho apart, at least 98% of samples
/// are usable, and recolouring one sample is bit-identical.
CheckReport colouring_law_check(const Space& space, double t, int colours, double rho, std::size_t samples,
                                std::uint64_t seed, double alpha = 0.01);

}  // namespace ipp
