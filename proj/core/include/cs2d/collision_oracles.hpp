#pragma once

#include "cs2d/constants.hpp"

namespace cs2d {

/// Wave vector of the relative motion, m |v_rel| / 2 hbar.
double relative_wave_vector(double v_rel, const Constants& c);

/// Unitarity-limited s-wave cross section 8 pi / k^2.
/// Throws CrossSectionOverflow for v_rel = 0.
double cross_section(double v_rel, const Constants& c);

/// Cross section saturated at 8 pi / k_min^2 below k_min.
double capped_cross_section(double v_rel, double k_min, const Constants& c);

/// k_min = 1 / (2 l0): the momentum spread of the vertical ground state.
double default_k_min(double omega_osc, const Constants& c);

/// Upper bound of sigma_capped(g) g over all g: 16 pi hbar / (m k_min).
double sigma_g_majorant(double k_min, const Constants& c);

/// <sigma g> over the Maxwell distribution of relative velocities at T,
/// by quadrature. k_min = 0 uses the bare cross section.
double thermal_sigma_g(double T, const Constants& c, double k_min = 0.0);

/// Closed form of thermal_sigma_g for the bare cross section:
/// 32 pi hbar^2 / m^2 * sqrt(m / (pi k_B T)).
double thermal_sigma_g_closed(double T, const Constants& c);

struct ClassicalThermalization {
  double T_therm;     // s
  double observable;  // 1/(n_bar v_rms T_therm), m^2
  double v_rms;       // sqrt(k_B T0 / m)
};

/// Cross-dimensional thermalization of a harmonically trapped classical gas
/// with a unitarity-limited cross section:
///   1/(n_bar v_rms T_therm) = (2/(15 sqrt pi)) sigma(v_rms)
///                           = (64 sqrt pi / 15) hbar^2 / (m k_B T0).
ClassicalThermalization analytic_t_therm_classical(double n_bar, double T0,
                                                   const Constants& c);

/// Exponential limit for a quasi-2D gas:
///   T_therm = (9 m / 64 hbar) exp(hbar omega / k_B T) / n_2D.
double analytic_t_therm_quasi2d(double n_2D, double T, double omega_osc,
                                const Constants& c);

/// Whether k_B T <= hbar omega_osc, the stated domain of the quasi-2D law.
bool quasi2d_in_domain(double T, double omega_osc, const Constants& c);

/// Order-of-magnitude rate (n_2D hbar / m) exp(-hbar omega / k_B T).
double quasi2d_rate_estimate(double n_2D, double T, double omega_osc,
                             const Constants& c);

/// exp(-2 hbar omega / k_B T): fraction of 2D collisions able to excite
/// the relative motion to its first even level.
double suppression_factor(double T, double omega_osc, const Constants& c);

/// hbar n_2D / m.
double collision_rate_2d(double n_2D, const Constants& c);

/// Distribution of relative collision energies in 2D, exp(-E/kT)/kT.
double energy_distribution_2d(double E, double T, const Constants& c);

/// Integral of energy_distribution_2d over [E_min, inf), by quadrature.
double above_threshold_fraction(double E_min, double T, const Constants& c);

/// dE_z/dt = 2 hbar omega (hbar n_2D / m) exp(-2 hbar omega / k_B T).
double dEz_dt(double n_2D, double T, double omega_osc, const Constants& c);

/// hbar omega exp(-hbar omega / k_B T).
double delta_Ez(double T, double omega_osc, const Constants& c);

}  // namespace cs2d
