#include "collapse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collapse {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_values(const std::vector<double>& v) {
  require(v.size() >= 100, "need at least 100 samples");
  for (double x : v)
    if (std::isnan(x)) throw std::invalid_argument("NaN sample value");
}

}  // namespace

GofReport ks_test(const SampleSet& samples,
                  const std::function<double(double)>& cdf) {
  check_values(samples.values);
  std::vector<double> sorted = samples.values;
  std::sort(sorted.begin(), sorted.end());

  const std::size_t n = sorted.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    if (!(f >= 0.0 && f <= 1.0))
      throw std::invalid_argument("ks_test: cdf returned a value outside [0,1]");
    const double above = static_cast<double>(i + 1) * inv_n - f;
    const double below = f - static_cast<double>(i) * inv_n;
    dmax = std::max({dmax, above, below});
  }

  GofReport rep;
  rep.ks_statistic = dmax;
  rep.n = n;
  rep.threshold = 1.63 / std::sqrt(static_cast<double>(n));
  rep.pass = dmax < rep.threshold;
  return rep;
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "ks_two_sample: empty sample set");
  for (double x : a)
    if (std::isnan(x)) throw std::invalid_argument("NaN sample value");
  for (double x : b)
    if (std::isnan(x)) throw std::invalid_argument("NaN sample value");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double inv_na = 1.0 / static_cast<double>(a.size());
  const double inv_nb = 1.0 / static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0, dmax = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      fa = static_cast<double>(++i) * inv_na;
    else
      fb = static_cast<double>(++j) * inv_nb;
    dmax = std::max(dmax, std::fabs(fa - fb));
  }
  return dmax;
}

double ks_two_sample_threshold(std::size_t na, std::size_t nb) {
  require(na > 0 && nb > 0, "ks_two_sample_threshold: empty sample set");
  const double da = static_cast<double>(na), db = static_cast<double>(nb);
  return 1.63 * std::sqrt((da + db) / (da * db));
}

MomentComparison moment_compare(const SampleSet& samples, double analytic_mean,
                                double analytic_variance) {
  check_values(samples.values);
  require(analytic_variance >= 0.0, "analytic variance must be >= 0");
  const auto& v = samples.values;
  const double n = static_cast<double>(v.size());

  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double variance = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;

  MomentComparison cmp;
  cmp.sample_mean = mean;
  cmp.sample_variance = variance;
  cmp.analytic_mean = analytic_mean;
  cmp.analytic_variance = analytic_variance;
  const double se_mean = std::sqrt(variance / n);
  const double se_var = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  cmp.z_mean = se_mean > 0.0 ? (mean - analytic_mean) / se_mean : 0.0;
  cmp.z_variance =
      se_var > 0.0 ? (variance - analytic_variance) / se_var : 0.0;
  return cmp;
}

double l1_distance(const DensityGrid& a, const DensityGrid& b) {
  a.validate();
  b.validate();
  const double lo = std::max(a.energies.front(), b.energies.front());
  const double hi = std::min(a.energies.back(), b.energies.back());
  if (!(lo < hi))
    throw std::invalid_argument("l1_distance: supports do not overlap");

  // Union grid over the overlap.
  std::vector<double> grid;
  grid.reserve(a.energies.size() + b.energies.size());
  for (double x : a.energies)
    if (x >= lo && x <= hi) grid.push_back(x);
  for (double x : b.energies)
    if (x >= lo && x <= hi) grid.push_back(x);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  require(grid.size() >= 2, "l1_distance: overlap contains < 2 grid points");

  auto interp = [](const DensityGrid& g, double x) {
    const auto it =
        std::lower_bound(g.energies.begin(), g.energies.end(), x);
    if (it == g.energies.begin()) return g.density.front();
    if (it == g.energies.end()) return g.density.back();
    const std::size_t j = static_cast<std::size_t>(it - g.energies.begin());
    const double x0 = g.energies[j - 1], x1 = g.energies[j];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * g.density[j - 1] + w * g.density[j];
  };

  double total = 0.0;
  double prev = std::fabs(interp(a, grid[0]) - interp(b, grid[0]));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = std::fabs(interp(a, grid[i]) - interp(b, grid[i]));
    total += 0.5 * (grid[i] - grid[i - 1]) * (prev + cur);
    prev = cur;
  }
  return total;
}

}  // namespace collapse
