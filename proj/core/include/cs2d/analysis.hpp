#pragma once

#include <array>
#include <string>

#include "cs2d/constants.hpp"
#include "cs2d/dsmc.hpp"
#include "cs2d/timeseries.hpp"

namespace cs2d {

/// Least-squares fit of y = offset + amplitude exp(-t / tau).
struct FitResult {
  double tau = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  std::array<double, 3> variance{};  // tau, amplitude, offset
  double residual_rms = 0.0;
  bool degenerate = false;  // constant series or tau consistent with 0
};

/// Variable projection: the linear parameters are eliminated in closed
/// form and tau is searched on a log grid spanning the record, then refined
/// by golden section. Throws FitError when the optimum runs off the long
/// end of the grid (no decay visible).
FitResult fit_exponential(const std::vector<double>& t,
                          const std::vector<double>& y);
FitResult fit_exponential(const TimeSeries& ts, const std::string& column);

/// Peak relative drift of 2 v_x^2 + v_z^2 (columns v_x_rms, v_z_rms).
double kinetic_invariant(const TimeSeries& ts);

/// n lambda_DB^3 with lambda_DB = hbar sqrt(2 pi / (m k_B T)).
double phase_space_density(double n_peak, double T, const Constants& c);

struct TemperatureEstimate {
  std::array<double, 3> T{};
  std::array<double, 3> error{};
  bool axial_from_ladder = false;
};

/// k_B T_i = m <v_i^2>. In quantized-axial mode T_z comes from <axial_n>
/// through the Bose ladder at omega_osc.
TemperatureEstimate temperature_estimators(const GasState& state,
                                           const Constants& c);

}  // namespace cs2d
