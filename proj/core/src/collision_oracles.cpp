#include "cs2d/collision_oracles.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cs2d/errors.hpp"
#include "cs2d/trap.hpp"

namespace cs2d {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw InvalidConfig(name, "must be > 0");
}

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 15, 1e-13);
}

}  // namespace

double relative_wave_vector(double v_rel, const Constants& c) {
  return c.m_Cs * std::abs(v_rel) / (2.0 * c.hbar);
}

double cross_section(double v_rel, const Constants& c) {
  if (v_rel == 0.0)
    throw CrossSectionOverflow("cross_section: v_rel = 0 diverges");
  const double k = relative_wave_vector(v_rel, c);
  return 8.0 * kPi / (k * k);
}

double capped_cross_section(double v_rel, double k_min, const Constants& c) {
  require_positive(k_min, "k_min");
  const double k = std::max(relative_wave_vector(v_rel, c), k_min);
  return 8.0 * kPi / (k * k);
}

double default_k_min(double omega_osc, const Constants& c) {
  return 1.0 / (2.0 * ground_state_size(omega_osc, c));
}

double sigma_g_majorant(double k_min, const Constants& c) {
  require_positive(k_min, "k_min");
  return 16.0 * kPi * c.hbar / (c.m_Cs * k_min);
}

double thermal_sigma_g(double T, const Constants& c, double k_min) {
  require_positive(T, "T");
  const double mu = 0.5 * c.m_Cs;
  const double s2 = c.k_B * T / mu;  // per-axis variance of g
  const double norm = 4.0 * kPi * std::pow(2.0 * kPi * s2, -1.5);
  auto f = [&](double g) {
    if (g == 0.0) return 0.0;
    const double sig = k_min > 0.0 ? capped_cross_section(g, k_min, c)
                                   : cross_section(g, c);
    return sig * g * norm * g * g * std::exp(-g * g / (2.0 * s2));
  };
  const double g_hi = 40.0 * std::sqrt(s2);
  if (k_min > 0.0) {
    const double g_min = 2.0 * c.hbar * k_min / c.m_Cs;
    if (g_min < g_hi) return integrate(f, 0.0, g_min) + integrate(f, g_min, g_hi);
  }
  return integrate(f, 0.0, g_hi);
}

double thermal_sigma_g_closed(double T, const Constants& c) {
  require_positive(T, "T");
  const double m = c.m_Cs;
  return 32.0 * kPi * c.hbar * c.hbar / (m * m) *
         std::sqrt(m / (kPi * c.k_B * T));
}

ClassicalThermalization analytic_t_therm_classical(double n_bar, double T0,
                                                   const Constants& c) {
  require_positive(n_bar, "n_bar");
  require_positive(T0, "T0");
  ClassicalThermalization r;
  r.v_rms = std::sqrt(c.k_B * T0 / c.m_Cs);
  r.observable = 64.0 * std::sqrt(kPi) / 15.0 * c.hbar * c.hbar /
                 (c.m_Cs * c.k_B * T0);
  r.T_therm = 1.0 / (n_bar * r.v_rms * r.observable);
  return r;
}

double analytic_t_therm_quasi2d(double n_2D, double T, double omega_osc,
                                const Constants& c) {
  require_positive(n_2D, "n_2D");
  require_positive(T, "T");
  require_positive(omega_osc, "omega_osc");
  return 9.0 * c.m_Cs / (64.0 * c.hbar) / n_2D *
         std::exp(c.hbar * omega_osc / (c.k_B * T));
}

bool quasi2d_in_domain(double T, double omega_osc, const Constants& c) {
  return c.k_B * T <= c.hbar * omega_osc;
}

double quasi2d_rate_estimate(double n_2D, double T, double omega_osc,
                             const Constants& c) {
  return collision_rate_2d(n_2D, c) *
         std::exp(-c.hbar * omega_osc / (c.k_B * T));
}

double suppression_factor(double T, double omega_osc, const Constants& c) {
  require_positive(T, "T");
  return std::exp(-2.0 * c.hbar * omega_osc / (c.k_B * T));
}

double collision_rate_2d(double n_2D, const Constants& c) {
  if (!(n_2D >= 0.0)) throw InvalidConfig("n_2D", "must be >= 0");
  return c.hbar * n_2D / c.m_Cs;
}

double energy_distribution_2d(double E, double T, const Constants& c) {
  require_positive(T, "T");
  if (E < 0.0) return 0.0;
  const double kT = c.k_B * T;
  return std::exp(-E / kT) / kT;
}

double above_threshold_fraction(double E_min, double T, const Constants& c) {
  require_positive(T, "T");
  const double kT = c.k_B * T;
  const double lo = std::max(E_min, 0.0);
  // integrate in units of kT; the tail beyond 60 kT is below 1e-26
  auto f = [&](double x) { return energy_distribution_2d(x * kT, T, c) * kT; };
  return integrate(f, lo / kT, lo / kT + 60.0);
}

double dEz_dt(double n_2D, double T, double omega_osc, const Constants& c) {
  return 2.0 * c.hbar * omega_osc * collision_rate_2d(n_2D, c) *
         suppression_factor(T, omega_osc, c);
}

double delta_Ez(double T, double omega_osc, const Constants& c) {
  require_positive(T, "T");
  return c.hbar * omega_osc * std::exp(-c.hbar * omega_osc / (c.k_B * T));
}

}  // namespace cs2d
