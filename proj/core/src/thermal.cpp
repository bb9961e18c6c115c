#include "cs2d/thermal.hpp"

#include <cmath>

#include "cs2d/errors.hpp"

namespace cs2d {

ThermalState thermal_state(double T, double omega, const Constants& c) {
  if (!(omega > 0.0)) throw InvalidConfig("omega", "must be > 0");
  if (!(T >= 0.0)) throw InvalidConfig("T", "must be >= 0");
  ThermalState s;
  s.T = T;
  s.omega = omega;
  if (T == 0.0) return s;
  const double x = c.hbar * omega / (c.k_B * T);
  s.mean_n = 1.0 / std::expm1(x);
  s.ground_fraction = -std::expm1(-x);
  return s;
}

double temperature_from_ground_fraction(double p0, double omega,
                                        const Constants& c) {
  if (!(omega > 0.0)) throw InvalidConfig("omega", "must be > 0");
  if (!(p0 > 0.0 && p0 <= 1.0)) throw InvalidConfig("p0", "must lie in (0, 1]");
  if (p0 == 1.0) return 0.0;
  // p0 = 1 - exp(-x)  =>  x = -log(1 - p0)
  const double x = -std::log1p(-p0);
  return c.hbar * omega / (c.k_B * x);
}

double temperature_from_mean_n(double mean_n, double omega,
                               const Constants& c) {
  if (!(omega > 0.0)) throw InvalidConfig("omega", "must be > 0");
  if (!(mean_n >= 0.0)) throw InvalidConfig("mean_n", "must be >= 0");
  if (mean_n == 0.0) return 0.0;
  const double x = std::log1p(1.0 / mean_n);
  return c.hbar * omega / (c.k_B * x);
}

}  // namespace cs2d
