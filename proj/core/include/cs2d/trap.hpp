#pragma once

#include "cs2d/constants.hpp"

namespace cs2d {

/// Geometry and optical parameters of the 1D YAG intensity lattice.
/// Frequencies are angular (rad/s); detunings are signed, red = negative.
struct TrapConfig {
  double omega_osc = 0.0;  // vertical, per micro-well
  double omega_x = 0.0;
  double omega_y = 0.0;
  double depth_U0 = 0.0;        // J
  double theta_yag = 0.0;       // rad, beam angle to the horizontal
  double lattice_period = 0.0;  // m
  double alpha = 0.0;           // rad, MB polarization angle to x
  double pol_phase = 0.0;       // rad, relative phase of the MB components
  double delta_1 = 0.0;         // rad/s, YAG detuning from D1
  double delta_2 = 0.0;         // rad/s, YAG detuning from D2
};

/// The central micro-trap of the experiment: 80 kHz vertical, 175/140 Hz
/// horizontal, 140 uK depth, 52 deg beams, 665 nm period, alpha = 20 deg.
TrapConfig reference_trap(const Constants& c = Constants::cesium());

/// Throws InvalidConfig naming the first violated constraint.
void validate(const TrapConfig& trap);

/// eta = sqrt(omega_rec / omega_osc) on the D2 line.
double lamb_dicke(const TrapConfig& trap, const Constants& c);

/// Lamb-Dicke parameter for photons of wavelength `lambda`.
double lamb_dicke(double omega_osc, double lambda, const Constants& c);

/// rms size of the vibrational ground state, sqrt(hbar / 2 m omega).
double ground_state_size(double omega_osc, const Constants& c);

/// Raman coupling |m=3,n> -> |m=2,n-1> induced by the YAG beams, to first
/// order in the Lamb-Dicke parameter:
///
///   V = (sqrt6/24) eta U0 D_yag (1/D1 - 1/D2) sin(alpha) sin(theta) sqrt(n)
///
/// with D_yag = D1/3 + 2 D2/3. The Raman photons are YAG photons, so eta is
/// evaluated at the YAG wavelength. Returns 0 for n = 0. Only a linearly
/// polarized MB (pol_phase = 0) is covered.
double raman_coupling(const TrapConfig& trap, const Constants& c, int n = 1);

/// Rabi frequency 2 V_R / hbar of the n = 1 -> n = 0 coupling (rad/s).
double raman_rabi_frequency(const TrapConfig& trap, const Constants& c);

enum class ParityKind { odd, even, mixed };

/// Parity of the Raman coupling in z, fixed by the relative phase of the MB
/// polarization components. Odd coupling drives delta n = +-1; even coupling
/// drives delta n in {0, +-2}. Intermediate phases mix both with weights
/// cos^2 and sin^2 of the phase.
struct CouplingParity {
  ParityKind kind = ParityKind::odd;
  double odd_weight = 1.0;
  double even_weight = 0.0;

  bool allows(int delta_n) const;
};

CouplingParity coupling_parity(double pol_phase);

/// Trap after rotating the MB polarization to `alpha_new`. The lattice
/// contrast scales the vertical frequency by sqrt(cos alpha) and the
/// horizontal ones (and the depth, linearly) through (1 + cos alpha)/2.
TrapConfig rescale_frequencies(const TrapConfig& trap, double alpha_new);

/// Reduced horizontal temperature k_B T_h / (hbar omega_z1) after cooling to
/// k_B T_h = beta hbar omega_z2 in trap2 and returning adiabatically to trap1.
double two_step_final_temperature(double beta, const TrapConfig& trap1,
                                  const TrapConfig& trap2);

/// How the U^(5/6) law for the light-assisted loss coefficient is applied.
/// `as_stated` evaluates K_ref (U_new/U_ref)^(5/6). `as_applied` inverts the
/// ratio, so a shallower trap gives a larger K: K_ref (U_ref/U_new)^(5/6).
enum class LossScaling { as_stated, as_applied };

double loss_rate_scaling(double U_ref, double K_ref, double U_new,
                         LossScaling direction = LossScaling::as_stated);

}  // namespace cs2d
