#pragma once

#include <vector>

#include "cs2d/constants.hpp"

namespace cs2d {

/// Population left in |m=3> after a Raman pulse of duration t, averaged
/// over a thermal vibrational distribution:
///   S(t) = sum_n P(n) cos^2(sqrt(n) Omega_R t / 2).
std::vector<double> thermal_rabi_signal(double Omega_R, double T,
                                        double omega_osc,
                                        const std::vector<double>& t_grid,
                                        const Constants& c);

/// Least-squares frequency of a unit-amplitude oscillation
/// (1 + cos(W t))/2 fitted to the signal on [0, window].
double fit_effective_rabi(double Omega_R, double T, double omega_osc,
                          double window, const Constants& c);

/// Time at which the thermal coherence |sum_n P(n) exp(i sqrt(n) W t)|
/// falls to 1/e; its inverse is the dephasing rate.
double dephasing_time(double Omega_R, double T, double omega_osc,
                      const Constants& c);

/// sqrt(hbar omega / k_B T) Omega_R, read as a rate.
double expected_damping_rate(double Omega_R, double T, double omega_osc,
                             const Constants& c);

}  // namespace cs2d
