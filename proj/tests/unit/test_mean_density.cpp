#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cs2d/errors.hpp"
#include "cs2d/mean_density.hpp"

using namespace cs2d;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(MeanDensity, SinglePlaneMatchesGridIntegral) {
  const double sx = 20e-6, sy = 25e-6, sw = 50e-9;
  const long N = 1000;
  const auto md = mean_density({{0, N}}, sx, sy, sw);
  // <n> = int n^2 / int n on a grid, in units of the widths
  const int M = 161;
  const double L = 8.0, h = 2 * L / (M - 1);
  const double norm = N / (std::pow(2 * pi, 1.5) * sx * sy * sw);
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k) {
        const double x = -L + i * h, y = -L + j * h, z = -L + k * h;
        const double n = norm * std::exp(-0.5 * (x * x + y * y + z * z));
        s1 += n;
        s2 += n * n;
      }
  EXPECT_NEAR(md.n_bar / (s2 / s1), 1.0, 1e-6);
  EXPECT_NEAR(md.n_2D_bar, N / (4 * pi * sx * sy), 1e-6 * md.n_2D_bar);
  EXPECT_EQ(md.fwhm_planes, 1);
}

TEST(MeanDensity, IdenticalPlanesAreIndependent) {
  const double sx = 20e-6, sy = 25e-6, sw = 50e-9;
  const auto one = mean_density({{0, 500}}, sx, sy, sw);
  const auto two = mean_density({{0, 500}, {1, 500}}, sx, sy, sw);
  EXPECT_DOUBLE_EQ(one.n_bar, two.n_bar);
  EXPECT_DOUBLE_EQ(one.n_2D_bar, two.n_2D_bar);
  EXPECT_DOUBLE_EQ(two.participation, 2.0);
}

TEST(MeanDensity, PairCorrectionRemovesSelf) {
  const auto bare = mean_density({{0, 10}}, 1e-5, 1e-5, 1e-7);
  const auto pair = mean_density({{0, 10}}, 1e-5, 1e-5, 1e-7, true);
  EXPECT_NEAR(pair.n_bar / bare.n_bar, 0.9, 1e-14);
}

TEST(MeanDensity, LargeCloudPopulatesAboutTwoHundredPlanes) {
  const Constants c;
  const auto md = mean_density(CloudShape{60e-6}, 200000, reference_trap(c),
                               10e-6, c);
  EXPECT_NEAR(md.fwhm_planes, 200, 20);
  long total = 0;
  for (const auto& p : md.planes) total += p.atoms;
  EXPECT_EQ(total, 200000);
}

TEST(DistributePlanes, ConservesAtomsAndIsSymmetric) {
  for (long N : {1L, 7L, 1000L, 123457L}) {
    const auto planes = distribute_planes(N, 3e-6, 665e-9);
    long total = 0;
    for (const auto& p : planes) total += p.atoms;
    EXPECT_EQ(total, N);
  }
  const auto planes = distribute_planes(100000, 3e-6, 665e-9);
  for (const auto& p : planes)
    for (const auto& q : planes)
      if (q.index == -p.index) {
        EXPECT_LE(std::abs(p.atoms - q.atoms), 1);
      }
}

TEST(DistributePlanes, ZeroHeightIsOnePlane) {
  const auto planes = distribute_planes(42, 0.0, 665e-9);
  ASSERT_EQ(planes.size(), 1u);
  EXPECT_EQ(planes[0].atoms, 42);
}

TEST(WellWidth, ClassicalAndQuantumLimits) {
  const Constants c;
  const double w = 2 * pi * 80e3;
  const double T = 1e-3;
  EXPECT_NEAR(well_rms_width(T, w, c, VerticalProfile::quantum) /
                  well_rms_width(T, w, c, VerticalProfile::classical),
              1.0, 1e-3);
  EXPECT_NEAR(well_rms_width(0.0, w, c, VerticalProfile::quantum),
              ground_state_size(w, c), 1e-20);
}

TEST(MeanDensity, RejectsBadInput) {
  EXPECT_THROW(mean_density({}, 1e-5, 1e-5, 1e-7), InvalidConfig);
  EXPECT_THROW(mean_density({{0, 5}}, 0.0, 1e-5, 1e-7), InvalidConfig);
  EXPECT_THROW(distribute_planes(0, 1e-6, 665e-9), InvalidConfig);
}
