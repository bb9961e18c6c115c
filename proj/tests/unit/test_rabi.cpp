#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "cs2d/rabi.hpp"

using namespace cs2d;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double hbar = 1.054571817e-34;
constexpr double kB = 1.380649e-23;

// Direct thermal sum and brute-force scan, sampled differently from the
// library.
std::vector<double> ladder(double T, double w) {
  const double r = std::exp(-hbar * w / (kB * T));
  std::vector<double> p;
  for (double x = 1.0 - r; x > 1e-17; x *= r) p.push_back(x);
  return p;
}

double brute_force_rabi(double W0, double T, double w, double window) {
  const auto p = ladder(T, w);
  const int samples = 1001;
  std::vector<double> t(samples), s(samples, 0.0);
  for (int i = 0; i < samples; ++i) {
    t[i] = window * i / (samples - 1);
    for (size_t n = 0; n < p.size(); ++n) {
      const double c = std::cos(std::sqrt(double(n)) * W0 * t[i] / 2.0);
      s[i] += p[n] * c * c;
    }
  }
  auto cost = [&](double W) {
    double r = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double d = s[i] - 0.5 * (1.0 + std::cos(W * t[i]));
      r += d * d;
    }
    return r;
  };
  double best = 0.0, best_cost = 1e300;
  for (double W = 0.05 * W0; W <= 6.0 * W0; W += 1e-4 * W0) {
    const double c = cost(W);
    if (c < best_cost) best_cost = c, best = W;
  }
  return best;
}

}  // namespace

TEST(ThermalRabi, StartsInUpperState) {
  const Constants c;
  const auto s = thermal_rabi_signal(two_pi * 6e3, 26e-6, two_pi * 80e3,
                                     {0.0}, c);
  EXPECT_NEAR(s[0], 1.0, 1e-12);
}

TEST(ThermalRabi, ZeroTemperatureIsDark) {
  const Constants c;
  std::vector<double> t;
  for (int i = 0; i < 50; ++i) t.push_back(i * 2e-6);
  for (double s : thermal_rabi_signal(two_pi * 6e3, 0.0, two_pi * 80e3, t, c))
    EXPECT_DOUBLE_EQ(s, 1.0);
}

TEST(ThermalRabi, MatchesDirectThermalSum) {
  const Constants c;
  const double W = two_pi * 6e3, T = 26e-6, w = two_pi * 80e3;
  const auto p = ladder(T, w);
  std::vector<double> t{0.0, 7e-6, 19e-6, 40e-6, 150e-6};
  const auto s = thermal_rabi_signal(W, T, w, t, c);
  for (size_t i = 0; i < t.size(); ++i) {
    double e = 0.0;
    for (size_t n = 0; n < p.size(); ++n)
      e += p[n] * std::pow(std::cos(std::sqrt(double(n)) * W * t[i] / 2), 2);
    EXPECT_NEAR(s[i], e, 1e-12);
    EXPECT_GE(s[i], 0.0);
    EXPECT_LE(s[i], 1.0);
  }
}

TEST(ThermalRabi, NeverBelowDarkPopulation) {
  const Constants c;
  const double w = two_pi * 80e3, T = 5e-6;
  const double p0 = -std::expm1(-hbar * w / (kB * T));
  std::vector<double> t;
  for (int i = 0; i < 400; ++i) t.push_back(i * 1e-6);
  for (double s : thermal_rabi_signal(two_pi * 6e3, T, w, t, c))
    EXPECT_GE(s, p0 - 1e-12);
}

TEST(ThermalRabi, EffectiveFrequencyMatchesBruteForce) {
  const Constants c;
  const double W = two_pi * 6e3, T = 26e-6, w = two_pi * 80e3;
  const double fit = fit_effective_rabi(W, T, w, 40e-6, c);
  EXPECT_NEAR(fit / brute_force_rabi(W, T, w, 40e-6), 1.0, 2e-3);
  EXPECT_NEAR(fit, 58902.65, 1.0);
}

TEST(ThermalRabi, DephasingTimeIsOneOverE) {
  const Constants c;
  const double W = two_pi * 6e3, T = 26e-6, w = two_pi * 80e3;
  const double td = dephasing_time(W, T, w, c);
  const auto p = ladder(T, w);
  auto coh = [&](double t) {
    std::complex<double> z = 0.0;
    for (size_t n = 0; n < p.size(); ++n)
      z += p[n] * std::polar(1.0, std::sqrt(double(n)) * W * t);
    return std::abs(z);
  };
  EXPECT_NEAR(coh(td), std::exp(-1.0), 1e-6);
  for (double f : {0.2, 0.5, 0.9}) EXPECT_GT(coh(f * td), std::exp(-1.0));
}

TEST(ThermalRabi, ExpectedDampingNearFourTenths) {
  const Constants c;
  const double W = two_pi * 6e3, w = two_pi * 80e3;
  const double r = expected_damping_rate(W, 26e-6, w, c) / W;
  EXPECT_NEAR(r, std::sqrt(hbar * w / (kB * 26e-6)), 1e-9);
  EXPECT_NEAR(r, 0.4, 0.02);
}
