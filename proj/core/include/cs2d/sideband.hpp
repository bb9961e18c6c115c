#pragma once

#include <string>
#include <vector>

#include "cs2d/trap.hpp"

namespace cs2d {

/// Parameters of the reduced {m=3, m=2} x n rate model. All frequencies are
/// angular. `detuning_delta` is the atom's offset of its vibrational
/// frequency from omega_osc, so the sideband |3,n> -> |2,n+k> is mismatched
/// by zeeman_splitting + k (omega_osc + detuning_delta).
struct RateModelConfig {
  double omega_osc = kTwoPi * 80.0e3;
  double Omega_R = kTwoPi * 5.0e3;
  double Gamma_prime = kTwoPi * 4.8e3;
  double zeeman_splitting = kTwoPi * 80.0e3;
  double detuning_delta = 0.0;
  double sigma_minus_fraction = 0.0;
  CouplingParity parity{};
  int n_max = 40;
  double eta = 0.16;
  // false: m=2 is repumped instantly back to m=3 with n preserved.
  // true: m=2 levels are kept explicitly and decay at Gamma_prime.
  bool explicit_repump = false;
};

/// Throws InvalidConfig on hard violations; returns soft warnings (e.g. the
/// resolved-sideband ordering Omega_R < Gamma' < omega_osc not holding).
std::vector<std::string> validate(const RateModelConfig& cfg);

struct PopulationVector {
  int n_max = 0;
  std::vector<double> p3;  // |m=3, n>
  std::vector<double> p2;  // |m=2, n>

  PopulationVector() = default;
  explicit PopulationVector(int n_max_)
      : n_max(n_max_), p3(n_max_ + 1, 0.0), p2(n_max_ + 1, 0.0) {}

  double total() const;
  double mean_n() const;
  double ground_fraction() const;  // p3[0] + p2[0]
  /// Population in the top `levels` levels of the ladder.
  double leakage(int levels = 1) const;
};

/// Thermal ladder in m=3. Population beyond n_max is folded into n_max.
PopulationVector thermal_population(double mean_n, int n_max);

/// Dense generator Q (dp/dt = Q p), column-major over the state index.
/// Index: m=3 -> n; m=2 -> n_max + 1 + n (only when explicit_repump).
struct RateMatrix {
  int n_max = 0;
  bool explicit_repump = false;
  int dim = 0;
  std::vector<double> q;

  double operator()(int to, int from) const { return q[from * dim + to]; }
  double& operator()(int to, int from) { return q[from * dim + to]; }

  std::vector<double> flatten(const PopulationVector& p) const;
  PopulationVector unflatten(const std::vector<double>& x) const;
};

/// Raman Rabi frequency of |3,n> -> |2,n+k> before parity weighting.
double sideband_rabi(const RateModelConfig& cfg, int n, int k);

/// Raman transfer rate |3,n> -> |2,n+k> including parity and Lorentzian.
double raman_rate(const RateModelConfig& cfg, int n, int k);

RateMatrix build_rate_matrix(const RateModelConfig& cfg);

/// Unique stationary distribution. Throws AmbiguousSteadyState when the
/// generator has more than one (e.g. Omega_R = 0 with no sigma- light).
PopulationVector steady_state(const RateMatrix& Q);

/// Omega_R^2 / Gamma', reduced by Gamma'^2/(Gamma'^2 + 4 Delta^2) for an
/// atom detuned by Delta = detuning_delta.
double cooling_rate(const RateModelConfig& cfg);

/// Reduction factor 1 + 4 Delta^2 / Gamma'^2 of the cooling rate.
double lorentzian_reduction(double Delta, double Gamma_prime);

/// Closed-form limits of the steady-state p[3][1].
double resonant_p31_estimate(double Gamma_prime, double omega_osc);
double detuned_p31_estimate(double delta, double omega_osc);

struct Trajectory {
  std::vector<double> t;
  std::vector<PopulationVector> p;

  std::vector<double> mean_n() const;
};

/// Integrates dp/dt = Q p on `t_grid` by exact matrix exponentials.
/// Throws NumericalError if probability drifts by more than 1e-8 per step.
Trajectory evolve(const RateMatrix& Q, const PopulationVector& p0,
                  const std::vector<double>& t_grid);

/// Per-atom detuning spread: `points` Gaussian quantiles of width sigma.
struct DetuningSample {
  double delta;
  double weight;
};
std::vector<DetuningSample> gaussian_detunings(double sigma, int points);

/// Ensemble-averaged <n>(t) over atoms with a Gaussian spread of
/// vibrational frequency offsets.
std::vector<double> ensemble_mean_n(const RateModelConfig& cfg,
                                    const PopulationVector& p0,
                                    const std::vector<double>& t_grid,
                                    double sigma_delta, int points = 21);

/// First time at which series(t) - series.back() drops below 1/e of its
/// initial excess; linear interpolation; NaN if it never does.
double one_over_e_time(const std::vector<double>& t,
                       const std::vector<double>& series,
                       double baseline);

}  // namespace cs2d
