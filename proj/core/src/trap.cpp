#include "cs2d/trap.hpp"

#include <cmath>
#include <numbers>

#include "cs2d/errors.hpp"

namespace cs2d {

namespace {

double deg(double d) { return d * std::numbers::pi / 180.0; }

// Signed angular detuning of light at `lambda` from a line at `lambda_line`.
double detuning(double lambda, double lambda_line, const Constants& c) {
  return kTwoPi * c.c_light * (1.0 / lambda - 1.0 / lambda_line);
}

}  // namespace

TrapConfig reference_trap(const Constants& c) {
  TrapConfig t;
  t.omega_osc = kTwoPi * 80.0e3;
  t.omega_x = kTwoPi * 175.0;
  t.omega_y = kTwoPi * 140.0;
  t.depth_U0 = 140.0e-6 * c.k_B;
  t.theta_yag = deg(52.0);
  t.lattice_period = 665.0e-9;
  t.alpha = deg(20.0);
  t.pol_phase = 0.0;
  t.delta_1 = detuning(c.lambda_YAG, c.lambda_D1, c);
  t.delta_2 = detuning(c.lambda_YAG, c.lambda_D2, c);
  return t;
}

void validate(const TrapConfig& t) {
  if (!(t.omega_osc > 0.0)) throw InvalidConfig("omega_osc", "must be > 0");
  if (!(t.omega_x > 0.0)) throw InvalidConfig("omega_x", "must be > 0");
  if (!(t.omega_y > 0.0)) throw InvalidConfig("omega_y", "must be > 0");
  if (!(t.omega_osc > 10.0 * t.omega_x && t.omega_osc > 10.0 * t.omega_y))
    throw InvalidConfig("omega_osc",
                        "must exceed 10x the horizontal frequencies");
  if (!(t.lattice_period > 0.0))
    throw InvalidConfig("lattice_period", "must be > 0");
  if (!(t.depth_U0 > 0.0)) throw InvalidConfig("depth_U0", "must be > 0");
  if (!(t.alpha >= 0.0 && t.alpha <= std::numbers::pi / 2))
    throw InvalidConfig("alpha", "must lie in [0, pi/2]");
  if (!(t.pol_phase >= 0.0 && t.pol_phase <= std::numbers::pi))
    throw InvalidConfig("pol_phase", "must lie in [0, pi]");
}

double lamb_dicke(double omega_osc, double lambda, const Constants& c) {
  if (!(omega_osc > 0.0)) throw InvalidConfig("omega_osc", "must be > 0");
  return std::sqrt(recoil_frequency(c, lambda) / omega_osc);
}

double lamb_dicke(const TrapConfig& trap, const Constants& c) {
  return lamb_dicke(trap.omega_osc, c.lambda_D2, c);
}

double ground_state_size(double omega_osc, const Constants& c) {
  if (!(omega_osc > 0.0)) throw InvalidConfig("omega_osc", "must be > 0");
  return std::sqrt(c.hbar / (2.0 * c.m_Cs * omega_osc));
}

double raman_coupling(const TrapConfig& trap, const Constants& c, int n) {
  if (trap.pol_phase != 0.0)
    throw UnsupportedConfiguration(
        "raman_coupling: closed form covers a linearly polarized MB only "
        "(pol_phase = 0); use coupling_parity for elliptical polarization");
  if (n < 0) throw InvalidConfig("n", "vibrational level must be >= 0");
  if (n == 0) return 0.0;
  if (trap.delta_1 == 0.0 || trap.delta_2 == 0.0)
    throw InvalidConfig("delta_1/delta_2", "detunings must be non-zero");

  const double eta = lamb_dicke(trap.omega_osc, c.lambda_YAG, c);
  const double d_yag = trap.delta_1 / 3.0 + 2.0 * trap.delta_2 / 3.0;
  const double v_r = std::sqrt(6.0) / 24.0 * eta * trap.depth_U0 * d_yag *
                     (1.0 / trap.delta_1 - 1.0 / trap.delta_2) *
                     std::sin(trap.alpha) * std::sin(trap.theta_yag);
  return v_r * std::sqrt(static_cast<double>(n));
}

double raman_rabi_frequency(const TrapConfig& trap, const Constants& c) {
  return 2.0 * std::abs(raman_coupling(trap, c, 1)) / c.hbar;
}

bool CouplingParity::allows(int delta_n) const {
  const int a = delta_n < 0 ? -delta_n : delta_n;
  if (a == 1) return odd_weight > 0.0;
  if (a == 0 || a == 2) return even_weight > 0.0;
  return false;
}

CouplingParity coupling_parity(double pol_phase) {
  const double co = std::cos(pol_phase);
  const double si = std::sin(pol_phase);
  CouplingParity p;
  p.odd_weight = co * co;
  p.even_weight = si * si;
  // exact phases land on exact weights
  constexpr double tol = 1e-12;
  if (p.even_weight < tol) {
    p = {ParityKind::odd, 1.0, 0.0};
  } else if (p.odd_weight < tol) {
    p = {ParityKind::even, 0.0, 1.0};
  } else {
    p.kind = ParityKind::mixed;
  }
  return p;
}

TrapConfig rescale_frequencies(const TrapConfig& trap, double alpha_new) {
  const double half_pi = std::numbers::pi / 2;
  if (!(alpha_new >= 0.0 && alpha_new < half_pi))
    throw DegenerateLattice("alpha", "must lie in [0, pi/2): lattice contrast "
                                     "vanishes at pi/2");
  const double cos_old = std::cos(trap.alpha);
  if (!(cos_old > 0.0))
    throw DegenerateLattice("alpha", "source trap has zero lattice contrast");
  const double cos_new = std::cos(alpha_new);

  const double vertical = std::sqrt(cos_new / cos_old);
  const double horizontal_sq = (1.0 + cos_new) / (1.0 + cos_old);
  const double horizontal = std::sqrt(horizontal_sq);

  TrapConfig out = trap;
  out.alpha = alpha_new;
  out.omega_osc = trap.omega_osc * vertical;
  out.omega_x = trap.omega_x * horizontal;
  out.omega_y = trap.omega_y * horizontal;
  out.depth_U0 = trap.depth_U0 * horizontal_sq;
  return out;
}

double two_step_final_temperature(double beta, const TrapConfig& trap1,
                                  const TrapConfig& trap2) {
  if (!(beta > 0.0)) throw InvalidConfig("beta", "must be > 0");
  return beta * (trap1.omega_x / trap2.omega_x) *
         (trap2.omega_osc / trap1.omega_osc);
}

double loss_rate_scaling(double U_ref, double K_ref, double U_new,
                         LossScaling direction) {
  if (!(U_ref > 0.0)) throw InvalidConfig("U_ref", "must be > 0");
  if (!(U_new > 0.0)) throw InvalidConfig("U_new", "must be > 0");
  const double ratio =
      direction == LossScaling::as_stated ? U_new / U_ref : U_ref / U_new;
  return K_ref * std::pow(ratio, 5.0 / 6.0);
}

}  // namespace cs2d
