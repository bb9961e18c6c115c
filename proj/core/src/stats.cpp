#include "cs2d/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "cs2d/errors.hpp"

namespace cs2d {

MeanError mean_error(const std::vector<double>& x) {
  MeanError r;
  if (x.empty()) return r;
  double s = 0.0;
  for (double v : x) s += v;
  r.mean = s / x.size();
  if (x.size() < 2) return r;
  double ss = 0.0;
  for (double v : x) ss += (v - r.mean) * (v - r.mean);
  r.stddev = std::sqrt(ss / (x.size() - 1));
  r.sem = r.stddev / std::sqrt(static_cast<double>(x.size()));
  return r;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  // 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_test_normal(std::vector<double> x, double mean, double sigma) {
  if (x.empty()) throw InvalidConfig("x", "must be non-empty");
  if (!(sigma > 0.0)) throw InvalidConfig("sigma", "must be > 0");
  std::sort(x.begin(), x.end());
  const boost::math::normal_distribution<double> dist(mean, sigma);
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = boost::math::cdf(dist, x[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

TestResult chi2_uniform(const std::vector<long>& counts) {
  if (counts.size() < 2) throw InvalidConfig("counts", "need >= 2 bins");
  double total = 0.0;
  for (long c : counts) total += c;
  if (!(total > 0.0)) throw InvalidConfig("counts", "empty histogram");
  const double e = total / counts.size();
  double chi2 = 0.0;
  for (long c : counts) chi2 += (c - e) * (c - e) / e;
  const boost::math::chi_squared_distribution<double> dist(
      static_cast<double>(counts.size() - 1));
  return {chi2, boost::math::cdf(boost::math::complement(dist, chi2))};
}

TestResult chi2_isotropy(const std::vector<std::array<double, 3>>& dirs,
                         int bins) {
  if (bins < 2) throw InvalidConfig("bins", "must be >= 2");
  std::vector<long> counts(static_cast<std::size_t>(bins) * bins, 0);
  for (const auto& d : dirs) {
    const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (!(r > 0.0)) throw InvalidConfig("dirs", "zero vector");
    const double u = 0.5 * (d[2] / r + 1.0);
    const double phi = std::atan2(d[1], d[0]) + std::numbers::pi;
    const int i = std::min(bins - 1, static_cast<int>(u * bins));
    const int j = std::min(
        bins - 1, static_cast<int>(phi / (2.0 * std::numbers::pi) * bins));
    ++counts[static_cast<std::size_t>(i) * bins + j];
  }
  return chi2_uniform(counts);
}

}  // namespace cs2d
