#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cs2d/analysis.hpp"
#include "cs2d/collision_oracles.hpp"
#include "cs2d/dsmc.hpp"
#include "cs2d/errors.hpp"
#include "cs2d/mean_density.hpp"
#include "cs2d/runner.hpp"
#include "cs2d/stats.hpp"

using namespace cs2d;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double hbar = 1.054571817e-34;
constexpr double kB = 1.380649e-23;
constexpr double mCs = 2.20694657e-25;

GasState thermal(long N, std::array<double, 3> T, std::uint64_t seed,
                 int planes = 1) {
  Rng rng = make_rng(seed);
  std::vector<long> counts(planes, N / planes);
  auto s = sample_thermal_gas(reference_trap(), GasMode::classical3d, counts, T,
                              rng, Constants{});
  s.rng_seed = seed;
  return s;
}

// Uniform gas in a periodic box of side L.
GasState box_gas(long N, double L, std::array<double, 3> T,
                 std::uint64_t seed) {
  GasState s = thermal(N, T, seed);
  Rng rng = make_rng(seed, 1);
  std::uniform_real_distribution<double> u(0.0, L);
  for (auto& p : s.particles)
    for (int a = 0; a < 3; ++a) p.r[a] = u(rng);
  return s;
}

DsmcConfig box_config(double L, PairSelection sel = PairSelection::ntc) {
  DsmcConfig cfg;
  cfg.geometry = Geometry::periodic_box;
  cfg.box_length = L;
  cfg.box_cells = 4;
  cfg.selection = sel;
  return cfg;
}

// E[f(g)] over the Maxwell relative-velocity distribution of a gas with
// per-axis temperatures T, by Monte Carlo.
template <class F>
double relative_average(std::array<double, 3> T, F f, int samples = 2000000) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    std::array<double, 3> g;
    for (int a = 0; a < 3; ++a) g[a] = std::sqrt(2 * kB * T[a] / mCs) * normal(rng);
    acc += f(g);
  }
  return acc / samples;
}

double capped_sigma_g(const std::array<double, 3>& g, double kmin) {
  const double gm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  const double k = std::max(mCs * gm / (2 * hbar), kmin);
  return 8 * pi / (k * k) * gm;
}

}  // namespace

TEST(AdvanceFree, FullPeriodReturns) {
  GasState s = thermal(200, {10e-6, 10e-6, 10e-6}, 1);
  const GasState s0 = s;
  advance_free(s, 2 * pi / s.trap.omega_x);
  for (size_t i = 0; i < s.particles.size(); ++i) {
    const auto& a = s.particles[i];
    const auto& b = s0.particles[i];
    EXPECT_NEAR(a.r[0], b.r[0], 1e-12 * (std::abs(b.r[0]) + 1e-6));
    EXPECT_NEAR(a.v[0], b.v[0], 1e-12 * (std::abs(b.v[0]) + 1e-2));
  }
}

TEST(AdvanceFree, HalfPeriodInverts) {
  GasState s = thermal(200, {10e-6, 10e-6, 10e-6}, 2);
  const GasState s0 = s;
  advance_free(s, pi / s.trap.omega_x);
  for (size_t i = 0; i < s.particles.size(); ++i) {
    EXPECT_NEAR(s.particles[i].r[0], -s0.particles[i].r[0], 1e-18);
    EXPECT_NEAR(s.particles[i].v[0], -s0.particles[i].v[0], 1e-14);
  }
}

TEST(AdvanceFree, PerAxisEnergyInvariant) {
  const Constants c;
  GasState s = thermal(500, {10e-6, 12e-6, 8e-6}, 3);
  const GasState s0 = s;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1e-2);
  for (int rep = 0; rep < 20; ++rep) advance_free(s, u(rng));
  for (size_t i = 0; i < s.particles.size(); ++i)
    for (int a = 0; a < 3; ++a) {
      const double e0 = axis_energy(s0.particles[i], a, s.trap, c);
      EXPECT_NEAR(axis_energy(s.particles[i], a, s.trap, c) / e0, 1.0, 1e-12);
    }
}

TEST(AdvanceFree, RejectsNonPositiveStep) {
  GasState s = thermal(10, {10e-6, 10e-6, 10e-6}, 4);
  EXPECT_THROW(advance_free(s, 0.0), InvalidConfig);
}

TEST(Scatter, RelativeDirectionIsIsotropic) {
  Rng rng = make_rng(99);
  Particle a, b;
  a.v = {0.02, 0.0, 0.0};
  b.v = {-0.02, 0.0, 0.0};
  std::vector<std::array<double, 3>> dirs;
  for (int i = 0; i < 10000; ++i) {
    Particle x = a, y = b;
    scatter_isotropic_3d(x, y, rng);
    std::array<double, 3> g;
    double n = 0.0;
    for (int k = 0; k < 3; ++k) {
      g[k] = x.v[k] - y.v[k];
      n += g[k] * g[k];
    }
    EXPECT_NEAR(std::sqrt(n), 0.04, 1e-15);
    dirs.push_back({g[0] / 0.04, g[1] / 0.04, g[2] / 0.04});
  }
  EXPECT_GT(chi2_isotropy(dirs, 10).p_value, 0.001);
}

TEST(Scatter, PairConservation) {
  const Constants c;
  Rng rng = make_rng(5);
  std::normal_distribution<double> normal(0.0, 0.03);
  for (int i = 0; i < 10000; ++i) {
    Particle a, b;
    for (int k = 0; k < 3; ++k) a.v[k] = normal(rng), b.v[k] = normal(rng);
    const Particle a0 = a, b0 = b;
    scatter_isotropic_3d(a, b, rng);
    double e0 = 0, e1 = 0;
    for (int k = 0; k < 3; ++k) {
      const double p0 = a0.v[k] + b0.v[k], p1 = a.v[k] + b.v[k];
      EXPECT_NEAR(p1, p0, 1e-10 * (std::abs(a0.v[k]) + std::abs(b0.v[k])));
      e0 += a0.v[k] * a0.v[k] + b0.v[k] * b0.v[k];
      e1 += a.v[k] * a.v[k] + b.v[k] * b.v[k];
    }
    EXPECT_NEAR(e1 / e0, 1.0, 1e-10);
  }
  (void)c;
}

TEST(DsmcEngine, EveryCollisionConservesPairMomentumAndEnergy) {
  const Constants c;
  GasState s = thermal(2000, {12e-6, 12e-6, 6e-6}, 8, 2);
  DsmcConfig cfg;
  DsmcEngine eng(s, cfg, c);
  long events = 0;
  double worst = 0.0;
  eng.set_event_hook([&](const CollisionEvent& e) {
    ++events;
    double e0 = 0, e1 = 0;
    for (int k = 0; k < 3; ++k) {
      const double p0 = e.before[0].v[k] + e.before[1].v[k];
      const double p1 = e.after[0].v[k] + e.after[1].v[k];
      const double scale = std::abs(e.before[0].v[k]) + std::abs(e.before[1].v[k]);
      worst = std::max(worst, std::abs(p1 - p0) / scale);
      e0 += e.before[0].v[k] * e.before[0].v[k] + e.before[1].v[k] * e.before[1].v[k];
      e1 += e.after[0].v[k] * e.after[0].v[k] + e.after[1].v[k] * e.after[1].v[k];
    }
    worst = std::max(worst, std::abs(e1 / e0 - 1.0));
  });
  for (int i = 0; i < 50; ++i) eng.step(1e-4);
  EXPECT_GT(events, 100);
  EXPECT_LT(worst, 1e-10);
  EXPECT_NEAR(total_energy(eng.state(), c) / total_energy(s, c), 1.0, 1e-10);
}

TEST(DsmcEngine, BoxCollisionRateMatchesThermalAverage) {
  const Constants c;
  const long N = 2000;
  const double n = 1e17;
  const double L = std::cbrt(N / n);
  const double T = 10e-6;
  DsmcEngine eng(box_gas(N, L, {T, T, T}, 21), box_config(L), c);
  const double kmin = default_k_min(eng.state().trap.omega_osc, c);
  const double sg = relative_average({T, T, T}, [&](const auto& g) {
    return capped_sigma_g(g, kmin);
  });
  const double duration = 1.0;
  for (int i = 0; i < 1000; ++i) eng.step(duration / 1000);
  const double expected = 0.5 * N * (N - 1) / (L * L * L) * sg * duration;
  const double got = static_cast<double>(eng.counters().collisions);
  EXPECT_NEAR(got / expected, 1.0, 4.0 / std::sqrt(expected) + 0.01);
}

TEST(DsmcEngine, NoTimeCounterAgreesWithExhaustivePairing) {
  const Constants c;
  const long N = 400;
  const double L = std::cbrt(N / 1e17);
  const double T = 10e-6;
  double counts[2];
  for (int k = 0; k < 2; ++k) {
    const auto sel = k == 0 ? PairSelection::ntc : PairSelection::exhaustive;
    DsmcEngine eng(box_gas(N, L, {T, T, T}, 30 + k), box_config(L, sel), c);
    for (int i = 0; i < 4000; ++i) eng.step(1e-3);
    counts[k] = static_cast<double>(eng.counters().collisions);
  }
  EXPECT_NEAR(counts[0] / counts[1], 1.0,
              4.0 * std::sqrt(1.0 / counts[0] + 1.0 / counts[1]));
}

TEST(DsmcEngine, InitialEnergyTransferMatchesCollisionIntegral) {
  const Constants c;
  const std::array<double, 3> T{12e-6, 12e-6, 6e-6};
  const long N = 3000;
  const double L = std::cbrt(N / 1e17);
  const double kmin = default_k_min(reference_trap(c).omega_osc, c);
  // (m/4)(g^2/3 - g_z^2) is the mean transfer into z of an isotropic redraw
  const double flux = relative_average(T, [&](const auto& g) {
    const double g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    return capped_sigma_g(g, kmin) * 0.25 * mCs * (g2 / 3 - g[2] * g[2]);
  });
  const double dt = 1e-3;
  const double expected_rate = 0.5 * N * (N - 1) / (L * L * L) * flux;
  double transferred = 0.0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    DsmcEngine eng(box_gas(N, L, T, 1000 + r), box_config(L), c);
    eng.set_event_hook([&](const CollisionEvent& e) {
      for (int k = 0; k < 2; ++k)
        transferred += 0.5 * mCs *
                       (e.after[k].v[2] * e.after[k].v[2] -
                        e.before[k].v[2] * e.before[k].v[2]);
    });
    eng.step(dt);
  }
  EXPECT_NEAR(transferred / (reps * dt) / expected_rate, 1.0, 0.1);
}

TEST(DsmcEngine, RelaxesToMaxwellMarginals) {
  const Constants c;
  const long N = 10000;
  GasState s = thermal(N, {12e-6, 12e-6, 6e-6}, 40);
  const double T_eq = total_energy(s, c) / (3.0 * N * kB);
  DsmcConfig cfg;
  cfg.T_cells = T_eq;
  DsmcEngine eng(s, cfg, c);
  const double period = 2 * pi / s.trap.omega_x;
  for (int i = 0; i < 8 * 50; ++i) eng.step(period / 50);
  const double per_atom = 2.0 * eng.counters().collisions / N;
  EXPECT_GT(per_atom, 10.0);
  const double sigma = std::sqrt(kB * T_eq / mCs);
  for (int a = 0; a < 3; ++a) {
    std::vector<double> v;
    for (const auto& p : eng.state().particles) v.push_back(p.v[a]);
    EXPECT_GT(ks_test_normal(v, 0.0, sigma).p_value, 0.01) << "axis " << a;
  }
  // equipartition between axes
  std::array<double, 3> E{};
  for (const auto& p : eng.state().particles)
    for (int a = 0; a < 3; ++a) E[a] += axis_energy(p, a, eng.state().trap, c);
  const double mean = (E[0] + E[1] + E[2]) / 3;
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(E[a] / mean, 1.0, 4.0 / std::sqrt(double(N)));
}

TEST(DsmcEngine, Deterministic) {
  GasState s = thermal(1000, {12e-6, 12e-6, 6e-6}, 50);
  DsmcEngine a(s, {}), b(s, {});
  for (int i = 0; i < 30; ++i) a.step(1e-4), b.step(1e-4);
  ASSERT_EQ(a.counters().collisions, b.counters().collisions);
  for (size_t i = 0; i < s.particles.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      EXPECT_EQ(a.state().particles[i].r[k], b.state().particles[i].r[k]);
      EXPECT_EQ(a.state().particles[i].v[k], b.state().particles[i].v[k]);
    }
}

TEST(DsmcEngine, SubstepsKeepPairProbabilityBounded) {
  GasState s = thermal(1000, {10e-6, 10e-6, 10e-6}, 51);
  DsmcEngine eng(s, {});
  const double big = 20 * eng.max_collision_dt();
  eng.step(big);
  EXPECT_GE(eng.counters().substeps, 20u);
  EXPECT_NEAR(eng.state().t, big, 1e-15);
}

TEST(DsmcEngine, ClassicalKernelRejectsQuantizedState) {
  Rng rng = make_rng(1);
  auto s = sample_thermal_gas(reference_trap(), GasMode::quantized_axial, {100},
                              {10e-6, 10e-6, 0.0}, rng, Constants{});
  DsmcEngine eng(s, {});
  EXPECT_THROW(eng.collide_classical(1e-5), UnsupportedConfiguration);
}

TEST(ThermalizationTime, InverselyProportionalToAtomNumber) {
  const Constants c;
  ScenarioConfig s;
  s.mode = ScenarioMode::classical3d;
  s.trap = reference_trap(c);
  s.T_init = {12e-6, 12e-6, 6e-6};
  s.dsmc.planes = 19;
  s.schedule = {{PhaseKind::free_thermalize, 0.8, 0.01}};
  double tau[2];
  for (int k = 0; k < 2; ++k) {
    s.N = k == 0 ? 2000 : 8000;
    double acc = 0.0;
    const int reps = 3;
    for (int r = 0; r < reps; ++r) {
      const auto out = simulate_replica(s, 70 + 10 * k + r, c);
      acc += fit_exponential(out.series, "v_z_rms").tau;
    }
    tau[k] = acc / reps;
  }
  EXPECT_NEAR(tau[0] / tau[1], 4.0, 0.8);
}
