#pragma once

#include <vector>

#include "cs2d/trap.hpp"

namespace cs2d {

enum class VerticalProfile { classical, quantum };

/// Vertical rms width of the atoms in one micro-well at temperature T.
/// classical: sqrt(k_B T / m) / omega; quantum: l0 sqrt(coth(hbar omega / 2 k_B T)).
double well_rms_width(double T, double omega_osc, const Constants& c,
                      VerticalProfile profile = VerticalProfile::classical);

/// Integer atom numbers per lattice plane for a Gaussian cloud of rms
/// height sigma_z, by largest-remainder apportionment. Planes with zero
/// atoms are dropped; the centre plane carries index 0.
struct PlanePopulation {
  int index;
  long atoms;
};
std::vector<PlanePopulation> distribute_planes(long N, double sigma_z,
                                               double lattice_period);

struct PlaneDensity {
  int index;
  long atoms;
  double n_2D;   // pair-weighted mean areal density N / (4 pi sx sy)
  double n_bar;  // pair-weighted mean 3D density
};

struct MeanDensity {
  double n_bar = 0.0;     // sum N_i n_i / N
  double n_2D_bar = 0.0;  // sum N_i n_2D,i / N
  double peak_n_2D = 0.0;
  double sigma_x = 0.0, sigma_y = 0.0, sigma_well = 0.0;
  std::vector<PlaneDensity> planes;
  int fwhm_planes = 0;         // planes holding at least half the peak
  double participation = 0.0;  // (sum N_i)^2 / sum N_i^2
};

struct CloudShape {
  double sigma_z = 0.0;  // vertical extent of the cloud across planes
  double sigma_x = 0.0;  // 0: thermal width from T and omega_x
  double sigma_y = 0.0;
};

/// Mean density seen by an atom. `pair_corrected` replaces N_i by N_i - 1
/// in each plane's self-density, which is what a finite ensemble collides
/// with.
MeanDensity mean_density(const CloudShape& cloud, long N,
                         const TrapConfig& trap, double T, const Constants& c,
                         VerticalProfile profile = VerticalProfile::classical,
                         bool pair_corrected = false);

/// Same as mean_density for explicit per-plane populations.
MeanDensity mean_density(const std::vector<PlanePopulation>& planes,
                         double sigma_x, double sigma_y, double sigma_well,
                         bool pair_corrected = false);

}  // namespace cs2d
