#pragma once

#include <array>
#include <vector>

namespace cs2d {

struct MeanError {
  double mean = 0.0;
  double sem = 0.0;  // standard error of the mean
  double stddev = 0.0;
};

MeanError mean_error(const std::vector<double>& x);

/// Asymptotic Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

struct TestResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample KS test of `x` against N(mean, sigma^2).
TestResult ks_test_normal(std::vector<double> x, double mean, double sigma);

/// Pearson chi-square test of observed counts against equal expectation.
TestResult chi2_uniform(const std::vector<long>& counts);

/// Isotropy of 3D directions: joint (cos theta, phi) histogram with
/// `bins` x `bins` equal-solid-angle cells, tested with chi2_uniform.
TestResult chi2_isotropy(const std::vector<std::array<double, 3>>& dirs,
                         int bins = 10);

}  // namespace cs2d
