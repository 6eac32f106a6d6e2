#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ipp {

/// Welford accumulator; merge() is associative so per-replica statistics
/// can be combined in any grouping.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  double stddev() const;
  /// Standard error of the mean.
  double standard_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// A named scalar estimate with its Monte Carlo metadata.
struct EstimateReport {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::string window;
};

/// Ratio estimator sum(num)/sum(den) with a delta-method standard error,
/// treating each replica's (num, den) as one observation.
struct RatioEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};
RatioEstimate ratio_estimate(std::span<const double> num, std::span<const double> den);

struct TestResult {
  double statistic = 0.0;
  double dof = 0.0;
  double pvalue = 1.0;
};

double chi_square_sf(double statistic, double dof);
double normal_two_sided_p(double z);

/// Pearson goodness of fit of observed counts against Poisson(mean). Bins
/// are pooled left to right until each expects at least five hits.
TestResult poisson_gof(std::span<const std::size_t> counts, double mean);

/// Chi-square test of homogeneity between two samples of category labels.
/// Categories with fewer than `min_total` combined hits are pooled.
TestResult homogeneity_test(const std::map<std::vector<std::int64_t>, std::size_t>& a,
                            const std::map<std::vector<std::int64_t>, std::size_t>& b,
                            std::size_t min_total = 10);

/// Chi-square test of independence on an r x c contingency table.
TestResult independence_test(const std::vector<std::vector<std::size_t>>& table);

/// Chi-square test of a categorical sample against a uniform law on k cells.
TestResult uniform_gof(std::span<const std::size_t> cell_counts);

/// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double lambda);

/// Two-sample Kolmogorov-Smirnov test (asymptotic with small-sample
/// correction). Ties are handled by evaluating both ECDFs at each value.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Total variation distance between Poisson(m1) and Poisson(m2).
double poisson_total_variation(double m1, double m2);

/// Smallest k with P[Poisson(mean) <= k] >= p.
std::size_t poisson_quantile(double mean, double p);

/// Empirical quantile (type 1, inverse ECDF) of a sample.
double empirical_quantile(std::vector<double> sample, double p);

}  // namespace ipp
