#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "collapse/cir.hpp"

namespace collapse {

struct SampleSet {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string provenance;  // free-form note on how the samples were produced
};

struct MomentComparison {
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  double analytic_mean = 0.0;
  double analytic_variance = 0.0;
  double z_mean = 0.0;
  double z_variance = 0.0;
};

struct GofReport {
  double ks_statistic = 0.0;
  std::size_t n = 0;
  double threshold = 0.0;
  bool pass = false;
  bool has_moments = false;
  MomentComparison moments;
};

// One-sample Kolmogorov-Smirnov test against a CDF, fixed threshold
// 1.63/sqrt(n) (alpha = 0.01). Needs n >= 100; NaN samples are rejected.
GofReport ks_test(const SampleSet& samples,
                  const std::function<double(double)>& cdf);

// Two-sample KS statistic and its alpha = 0.01 threshold
// 1.63 sqrt((na+nb)/(na nb)).
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);
double ks_two_sample_threshold(std::size_t na, std::size_t nb);

// z-scores of the sample mean and variance against analytic values. The
// standard error of the variance uses the fourth central moment, so the
// comparison is honest for non-Gaussian samples.
MomentComparison moment_compare(const SampleSet& samples, double analytic_mean,
                                double analytic_variance);

// Trapezoid integral of |p_a - p_b| on the union grid over the overlap of
// the two supports, with linear interpolation of each density onto it.
double l1_distance(const DensityGrid& a, const DensityGrid& b);

}  // namespace collapse
