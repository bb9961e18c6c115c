#pragma once

#include <numbers>

namespace cs2d {

/// Physical constants used throughout. Defaults are CODATA 2018 and the
/// cesium D-line reference values.
struct Constants {
  double hbar = 1.054571817e-34;        // J s
  double k_B = 1.380649e-23;            // J/K
  double m_Cs = 2.20694657e-25;         // kg
  double lambda_D2 = 852.34727582e-9;   // m
  double lambda_D1 = 894.59295986e-9;   // m
  double lambda_YAG = 1064.0e-9;        // m
  double c_light = 299792458.0;         // m/s

  static Constants cesium() { return {}; }
};

/// Throws InvalidConfig if any constant is non-positive.
void validate(const Constants& c);

/// Recoil frequency hbar k^2 / 2m for light of wavelength `lambda` (rad/s).
double recoil_frequency(const Constants& c, double lambda);

/// Recoil frequency on the D2 line.
inline double recoil_frequency(const Constants& c) {
  return recoil_frequency(c, c.lambda_D2);
}

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace cs2d
