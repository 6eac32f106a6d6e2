#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ipp/rng.hpp"
#include "ipp/stats.hpp"

using namespace ipp;

namespace {

double poisson_pmf(double m, int k) { return std::exp(-m + k * std::log(m) - std::lgamma(k + 1.0)); }

}  // namespace

TEST(RunningStats, MatchesTwoPassAndMerges) {
  std::vector<double> xs;
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) xs.push_back(uniform01(rng) * 10.0 - 3.0);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  RunningStats all, left, right;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    all.add(xs[k]);
    (k < 400 ? left : right).add(xs[k]);
  }
  left.merge(right);
  EXPECT_NEAR(all.mean(), mean, 1e-12);
  EXPECT_NEAR(all.variance(), ss / (xs.size() - 1), 1e-9);
  EXPECT_NEAR(left.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-9);
  EXPECT_NEAR(all.standard_error(), std::sqrt(all.variance() / xs.size()), 1e-12);
}

TEST(PoissonGof, AcceptsPoissonRejectsShift) {
  Rng rng(3);
  std::poisson_distribution<std::size_t> good(50.0), bad(55.0);
  std::vector<std::size_t> a, b;
  for (int k = 0; k < 4000; ++k) {
    a.push_back(good(rng));
    b.push_back(bad(rng));
  }
  EXPECT_GT(poisson_gof(a, 50.0).pvalue, 0.01);
  EXPECT_LT(poisson_gof(b, 50.0).pvalue, 1e-6);
}

TEST(PoissonTotalVariation, MatchesDirectSum) {
  for (auto [m1, m2] : {std::pair{1.0, 1.2}, std::pair{100.0, 120.0}, std::pair{3.0, 3.0}}) {
    double tv = 0.0;
    for (int k = 0; k < 1000; ++k) tv += 0.5 * std::abs(poisson_pmf(m1, k) - poisson_pmf(m2, k));
    EXPECT_NEAR(poisson_total_variation(m1, m2), tv, 1e-9);
  }
}

TEST(ChiSquare, SurvivalFunctionKnownValues) {
  EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(chi_square_sf(18.307038053275146, 10), 0.05, 1e-9);
  EXPECT_NEAR(normal_two_sided_p(1.959963984540054), 0.05, 1e-9);
}

TEST(Kolmogorov, SurvivalAndTwoSample) {
  EXPECT_NEAR(kolmogorov_sf(1.3580986393225507), 0.05, 1e-6);
  Rng rng(8);
  std::vector<double> a, b, c;
  for (int k = 0; k < 2000; ++k) {
    a.push_back(uniform01(rng));
    b.push_back(uniform01(rng));
    c.push_back(uniform01(rng) * 1.1);
  }
  EXPECT_GT(ks_two_sample(a, b).pvalue, 0.01);
  EXPECT_LT(ks_two_sample(a, c).pvalue, 0.01);
  // ties: identical discrete samples
  std::vector<double> d(500, 1.0), e(500, 1.0);
  EXPECT_NEAR(ks_two_sample(d, e).statistic, 0.0, 1e-15);
}

TEST(Homogeneity, SameAndDifferentLaws) {
  Rng rng(5);
  std::poisson_distribution<long> p1(1.0), p2(1.0), p3(1.6);
  std::map<std::vector<std::int64_t>, std::size_t> a, b, c;
  for (int k = 0; k < 5000; ++k) {
    ++a[{p1(rng)}];
    ++b[{p2(rng)}];
    ++c[{p3(rng)}];
  }
  EXPECT_GT(homogeneity_test(a, b).pvalue, 0.01);
  EXPECT_LT(homogeneity_test(a, c).pvalue, 1e-6);
}

TEST(Independence, ProductTablePasses) {
  std::vector<std::vector<std::size_t>> t{{250, 250}, {250, 250}};
  EXPECT_NEAR(independence_test(t).statistic, 0.0, 1e-12);
  std::vector<std::vector<std::size_t>> dep{{400, 100}, {100, 400}};
  EXPECT_LT(independence_test(dep).pvalue, 1e-6);
}

TEST(RatioEstimate, ExactForProportionalData) {
  std::vector<double> num{2, 4, 6}, den{1, 2, 3};
  const auto r = ratio_estimate(num, den);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_NEAR(r.stderr_, 0.0, 1e-12);
}

TEST(Quantiles, PoissonAndEmpirical) {
  EXPECT_EQ(poisson_quantile(1.0, 0.5), 1u);
  EXPECT_EQ(poisson_quantile(100.0, 0.999), 132u);
  EXPECT_DOUBLE_EQ(empirical_quantile({5, 1, 3, 2, 4}, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(empirical_quantile({5, 1, 3, 2, 4}, 1.0), 5.0);
}
