#include "ipp/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ipp {

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(n_ + other.n_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.n_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / total;
  n_ += other.n_;
}

double RunningStats::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

double RunningStats::standard_error() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

RatioEstimate ratio_estimate(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size() || num.empty()) {
    throw std::invalid_argument("ratio estimate needs matching nonempty samples");
  }
  const double n = static_cast<double>(num.size());
  const double sx = std::accumulate(num.begin(), num.end(), 0.0);
  const double sy = std::accumulate(den.begin(), den.end(), 0.0);
  if (sy == 0.0) throw std::invalid_argument("ratio estimate with zero denominator");
  RatioEstimate r;
  r.value = sx / sy;
  if (num.size() > 1) {
    const double ybar = sy / n;
    double ss = 0.0;
    for (std::size_t k = 0; k < num.size(); ++k) {
      const double e = num[k] - r.value * den[k];
      ss += e * e;
    }
    r.stderr_ = std::sqrt(ss / (n - 1.0) / n) / ybar;
  }
  return r;
}

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

double normal_two_sided_p(double z) {
  return 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), std::abs(z)));
}

TestResult poisson_gof(std::span<const std::size_t> counts, double mean) {
  if (counts.empty()) throw std::invalid_argument("goodness of fit needs observations");
  const double n = static_cast<double>(counts.size());
  const boost::math::poisson_distribution<> law(mean);
  // Bin edges: accumulate expected mass left to right.
  const std::size_t top = poisson_quantile(mean, 1.0 - 1e-12) + 2;
  std::vector<std::size_t> upper;  // inclusive upper edge of each bin
  double acc = 0.0;
  for (std::size_t k = 0; k <= top; ++k) {
    acc += n * boost::math::pdf(law, static_cast<double>(k));
    if (acc >= 5.0) {
      upper.push_back(k);
      acc = 0.0;
    }
  }
  if (upper.empty()) upper.push_back(top);
  upper.back() = std::numeric_limits<std::size_t>::max();  // last bin absorbs the tail

  std::vector<double> observed(upper.size(), 0.0);
  for (auto c : counts) {
    const auto it = std::lower_bound(upper.begin(), upper.end(), c);
    observed[static_cast<std::size_t>(it - upper.begin())] += 1.0;
  }
  TestResult r;
  double lo = 0.0;
  for (std::size_t b = 0; b < upper.size(); ++b) {
    const double cdf_hi = b + 1 == upper.size() ? 1.0
                                                 : boost::math::cdf(law, static_cast<double>(upper[b]));
    const double expected = n * (cdf_hi - lo);
    lo = cdf_hi;
    if (expected > 0.0) {
      const double d = observed[b] - expected;
      r.statistic += d * d / expected;
    }
  }
  r.dof = static_cast<double>(upper.size()) - 1.0;
  r.pvalue = chi_square_sf(r.statistic, r.dof);
  return r;
}

TestResult homogeneity_test(const std::map<std::vector<std::int64_t>, std::size_t>& a,
                            const std::map<std::vector<std::int64_t>, std::size_t>& b,
                            std::size_t min_total) {
  std::map<std::vector<std::int64_t>, std::pair<double, double>> cells;
  for (const auto& [k, v] : a) cells[k].first += static_cast<double>(v);
  for (const auto& [k, v] : b) cells[k].second += static_cast<double>(v);
  // Pool sparse categories into one bucket.
  std::vector<std::pair<double, double>> kept;
  std::pair<double, double> pooled{0.0, 0.0};
  for (const auto& [k, v] : cells) {
    if (v.first + v.second >= static_cast<double>(min_total)) {
      kept.push_back(v);
    } else {
      pooled.first += v.first;
      pooled.second += v.second;
    }
  }
  if (pooled.first + pooled.second > 0.0) {
    if (pooled.first + pooled.second < static_cast<double>(min_total) && !kept.empty()) {
      auto smallest = std::min_element(kept.begin(), kept.end(), [](auto& x, auto& y) {
        return x.first + x.second < y.first + y.second;
      });
      smallest->first += pooled.first;
      smallest->second += pooled.second;
    } else {
      kept.push_back(pooled);
    }
  }
  double na = 0.0, nb = 0.0;
  for (const auto& v : kept) {
    na += v.first;
    nb += v.second;
  }
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("homogeneity test needs two nonempty samples");
  TestResult r;
  const double total = na + nb;
  for (const auto& v : kept) {
    const double t = v.first + v.second;
    const double ea = t * na / total;
    const double eb = t * nb / total;
    r.statistic += (v.first - ea) * (v.first - ea) / ea + (v.second - eb) * (v.second - eb) / eb;
  }
  r.dof = static_cast<double>(kept.size()) - 1.0;
  r.pvalue = chi_square_sf(r.statistic, r.dof);
  return r;
}

TestResult independence_test(const std::vector<std::vector<std::size_t>>& table) {
  const std::size_t rows = table.size();
  const std::size_t cols = rows ? table[0].size() : 0;
  std::vector<double> rs(rows, 0.0), cs(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = static_cast<double>(table[i][j]);
      rs[i] += v;
      cs[j] += v;
      total += v;
    }
  }
  TestResult r;
  if (total == 0.0) return r;
  std::size_t live_rows = 0, live_cols = 0;
  for (double v : rs) live_rows += v > 0.0;
  for (double v : cs) live_cols += v > 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = rs[i] * cs[j] / total;
      if (e > 0.0) {
        const double d = static_cast<double>(table[i][j]) - e;
        r.statistic += d * d / e;
      }
    }
  }
  r.dof = static_cast<double>((live_rows - 1) * (live_cols - 1));
  r.pvalue = chi_square_sf(r.statistic, r.dof);
  return r;
}

TestResult uniform_gof(std::span<const std::size_t> cell_counts) {
  TestResult r;
  if (cell_counts.size() < 2) return r;
  const double total = std::accumulate(cell_counts.begin(), cell_counts.end(), 0.0);
  const double e = total / static_cast<double>(cell_counts.size());
  if (e == 0.0) return r;
  for (auto c : cell_counts) r.statistic += (static_cast<double>(c) - e) * (static_cast<double>(c) - e) / e;
  r.dof = static_cast<double>(cell_counts.size()) - 1.0;
  r.pvalue = chi_square_sf(r.statistic, r.dof);
  return r;
}

double kolmogorov_sf(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  TestResult r;
  r.statistic = d;
  const double en = std::sqrt(na * nb / (na + nb));
  r.pvalue = kolmogorov_sf((en + 0.12 + 0.11 / en) * d);
  return r;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation needs paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double poisson_total_variation(double m1, double m2) {
  const std::size_t top = std::max(poisson_quantile(m1, 1.0 - 1e-15), poisson_quantile(m2, 1.0 - 1e-15)) + 10;
  double tv = 0.0;
  double p1 = std::exp(-m1), p2 = std::exp(-m2);
  for (std::size_t k = 0; k <= top; ++k) {
    tv += std::abs(p1 - p2);
    p1 *= m1 / static_cast<double>(k + 1);
    p2 *= m2 / static_cast<double>(k + 1);
  }
  return 0.5 * tv;
}

std::size_t poisson_quantile(double mean, double p) {
  if (mean <= 0.0) return 0;
  double pk = std::exp(-mean);
  double cdf = pk;
  std::size_t k = 0;
  // Start the scan near the mean when exp(-mean) underflows.
  if (pk == 0.0) {
    const boost::math::poisson_distribution<> law(mean);
    k = static_cast<std::size_t>(std::max(0.0, mean - 40.0 * std::sqrt(mean)));
    cdf = boost::math::cdf(law, static_cast<double>(k));
    pk = boost::math::pdf(law, static_cast<double>(k));
  }
  while (cdf < p) {
    ++k;
    pk *= mean / static_cast<double>(k);
    cdf += pk;
    if (pk == 0.0 && static_cast<double>(k) > mean) break;
  }
  return k;
}

double empirical_quantile(std::vector<double> sample, double p) {
  if (sample.empty()) return 0.0;
  std::sort(sample.begin(), sample.end());
  const double pos = std::ceil(p * static_cast<double>(sample.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(pos, 1.0, static_cast<double>(sample.size()))) - 1;
  return sample[idx];
}

}  // namespace ipp
