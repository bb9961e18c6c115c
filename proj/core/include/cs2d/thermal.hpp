#pragma once

#include "cs2d/constants.hpp"

namespace cs2d {

/// Thermal occupation of a harmonic ladder of frequency `omega`.
struct ThermalState {
  double T = 0.0;
  double omega = 0.0;
  double mean_n = 0.0;
  double ground_fraction = 1.0;
};

/// Bose ladder at temperature T. T = 0 gives the exact ground state.
ThermalState thermal_state(double T, double omega, const Constants& c);

/// Inverse of thermal_state().ground_fraction. p0 = 1 returns T = 0.
double temperature_from_ground_fraction(double p0, double omega,
                                        const Constants& c);

/// Inverse of thermal_state().mean_n. mean_n = 0 returns T = 0.
double temperature_from_mean_n(double mean_n, double omega,
                               const Constants& c);

}  // namespace cs2d
