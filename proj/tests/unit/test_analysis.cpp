#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cs2d/analysis.hpp"
#include "cs2d/errors.hpp"
#include "cs2d/rng.hpp"

using namespace cs2d;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double hbar = 1.054571817e-34;
constexpr double kB = 1.380649e-23;
constexpr double mCs = 2.20694657e-25;

struct Series {
  std::vector<double> t, y;
};

Series synthetic(double tau, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Series s;
  for (int i = 0; i < 50; ++i) {
    const double t = 0.5 * i / 49.0;
    const double clean = 1.0 + 2.0 * std::exp(-t / tau);
    s.t.push_back(t);
    s.y.push_back(clean * (1.0 + noise * normal(rng)));
  }
  return s;
}

}  // namespace

TEST(FitExponential, RecoversTauFromNoisyData) {
  double acc = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto s = synthetic(0.1, 0.05, seed);
    const auto r = fit_exponential(s.t, s.y);
    EXPECT_GT(r.tau, 0.0);
    EXPECT_GT(r.residual_rms, 0.0);
    acc += r.tau;
  }
  EXPECT_NEAR(acc / 100 / 0.1, 1.0, 0.05);
}

TEST(FitExponential, ExactDataExactly) {
  const auto s = synthetic(0.07, 0.0, 0);
  const auto r = fit_exponential(s.t, s.y);
  EXPECT_NEAR(r.tau, 0.07, 1e-7);
  EXPECT_NEAR(r.amplitude, 2.0, 1e-6);
  EXPECT_NEAR(r.offset, 1.0, 1e-6);
  EXPECT_FALSE(r.degenerate);
}

TEST(FitExponential, ConstantSeriesIsDegenerate) {
  std::vector<double> t, y;
  for (int i = 0; i < 20; ++i) t.push_back(i), y.push_back(3.5);
  const auto r = fit_exponential(t, y);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.offset, 3.5);
}

TEST(FitExponential, ScaleEquivariant) {
  const auto s = synthetic(0.1, 0.05, 3);
  const auto r = fit_exponential(s.t, s.y);
  for (double c : {1e-3, 7.0, 1e4}) {
    std::vector<double> y = s.y;
    for (double& v : y) v *= c;
    const auto q = fit_exponential(s.t, y);
    EXPECT_NEAR(q.tau / r.tau, 1.0, 1e-7);
    EXPECT_NEAR(q.amplitude / (c * r.amplitude), 1.0, 1e-7);
    EXPECT_NEAR(q.offset / (c * r.offset), 1.0, 1e-7);
  }
}

TEST(FitExponential, TooFewPointsRejected) {
  EXPECT_THROW(fit_exponential({0, 1, 2}, {3, 2, 1}), InvalidConfig);
}

TEST(FitExponential, RisingLinearHasNoDecay) {
  std::vector<double> t, y;
  for (int i = 0; i < 20; ++i) t.push_back(i), y.push_back(i);
  try {
    const auto r = fit_exponential(t, y);
    EXPECT_TRUE(r.degenerate || r.tau > 20.0);
  } catch (const FitError& e) {
    EXPECT_GE(e.residual_rms(), 0.0);
  }
}

TEST(FitExponential, TimeSeriesColumn) {
  const auto s = synthetic(0.1, 0.0, 0);
  TimeSeries ts({"v_z_rms"}, {"m/s"});
  for (size_t i = 0; i < s.t.size(); ++i) ts.append(s.t[i], {s.y[i]});
  EXPECT_NEAR(fit_exponential(ts, "v_z_rms").tau, 0.1, 1e-7);
}

TEST(KineticInvariant, CollisionlessRecordIsFlat) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  TimeSeries ts({"v_x_rms", "v_z_rms"});
  for (int i = 0; i < 100; ++i) {
    // exchange between axes that keeps 2 vx^2 + vz^2, plus sampling noise
    const double f = 0.3 * std::exp(-i / 30.0);
    const double vx2 = 1.0 - 0.5 * f, vz2 = 1.0 + f;
    ts.append(i * 1e-3, {std::sqrt(vx2) * (1 + 1e-4 * normal(rng)),
                         std::sqrt(vz2) * (1 + 1e-4 * normal(rng))});
  }
  EXPECT_LT(kinetic_invariant(ts), 1e-3);
}

TEST(KineticInvariant, MisScaledColumnDetected) {
  TimeSeries ts({"v_x_rms", "v_z_rms"});
  for (int i = 0; i < 100; ++i) {
    const double f = 0.3 * std::exp(-i / 30.0);
    ts.append(i * 1e-3, {std::sqrt(1.0 - 0.5 * f), std::sqrt(1.0 + f)});
  }
  EXPECT_LT(kinetic_invariant(ts), 1e-12);
  EXPECT_GT(kinetic_invariant(ts.scaled("v_z_rms", 3.0)), 0.1);
}

TEST(PhaseSpaceDensity, HandEvaluation) {
  const Constants c;
  const double n = 4e18, T = 4.3e-6;
  const double lambda = hbar * std::sqrt(2 * pi / (mCs * kB * T));
  EXPECT_NEAR(phase_space_density(n, T, c) / (n * std::pow(lambda, 3)), 1.0,
              1e-12);
  EXPECT_NEAR(phase_space_density(n, T, c), 1.56e-3, 0.01e-3);
}

TEST(PhaseSpaceDensity, QuadrupledTemperatureDividesByEight) {
  const Constants c;
  EXPECT_NEAR(phase_space_density(1e18, 16e-6, c) /
                  phase_space_density(1e18, 4e-6, c),
              0.125, 1e-14);
}

TEST(PhaseSpaceDensity, DecreasingInTemperature) {
  const Constants c;
  double prev = 1e300;
  for (double T = 1e-7; T < 1e-3; T *= 1.5) {
    const double v = phase_space_density(1e18, T, c);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(TemperatureEstimators, MaxwellSampleWithinThreeStandardErrors) {
  const Constants c;
  Rng rng = make_rng(17);
  const double T = 10e-6;
  const auto s = sample_thermal_gas(reference_trap(), GasMode::classical3d, {2000},
                                    {T, T, T}, rng, c);
  const auto e = temperature_estimators(s, c);
  for (int a = 0; a < 3; ++a) {
    EXPECT_GT(e.error[a], 0.0);
    EXPECT_NEAR(e.T[a], T, 3 * e.error[a]) << "axis " << a;
  }
}

TEST(TemperatureEstimators, SignFlipInvariant) {
  const Constants c;
  Rng rng = make_rng(18);
  auto s = sample_thermal_gas(reference_trap(), GasMode::classical3d, {500},
                              {8e-6, 9e-6, 10e-6}, rng, c);
  const auto a = temperature_estimators(s, c);
  for (auto& p : s.particles)
    for (double& v : p.v) v = -v;
  const auto b = temperature_estimators(s, c);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(a.T[k], b.T[k]);
}

TEST(TemperatureEstimators, ZeroVelocitiesAreZeroTemperature) {
  const Constants c;
  GasState s;
  s.trap = reference_trap();
  s.particles.resize(100);
  const auto e = temperature_estimators(s, c);
  for (int a = 0; a < 3; ++a) EXPECT_EQ(e.T[a], 0.0);
}

TEST(TemperatureEstimators, AxialLadderAtEightyThreePercentGround) {
  const Constants c;
  GasState s;
  s.trap = reference_trap();
  s.mode = GasMode::quantized_axial;
  const long N = 1000000;
  const double x = 0.17;
  long placed = 0;
  for (int n = 0; placed < N; ++n) {
    long k = std::lround(N * (1 - x) * std::pow(x, n));
    if (k == 0) k = N - placed;
    for (long i = 0; i < k && placed < N; ++i, ++placed) {
      Particle p;
      p.axial_n = n;
      s.particles.push_back(p);
    }
  }
  const auto e = temperature_estimators(s, c);
  EXPECT_TRUE(e.axial_from_ladder);
  const double reduced = kB * e.T[2] / (hbar * s.trap.omega_osc);
  EXPECT_NEAR(reduced, 0.56, 0.01);
}
