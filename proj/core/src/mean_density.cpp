#include "cs2d/mean_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cs2d/errors.hpp"

namespace cs2d {

namespace {
constexpr double kPi = std::numbers::pi;
}

double well_rms_width(double T, double omega_osc, const Constants& c,
                      VerticalProfile profile) {
  if (!(omega_osc > 0.0)) throw InvalidConfig("omega_osc", "must be > 0");
  if (profile == VerticalProfile::quantum) {
    const double l0 = ground_state_size(omega_osc, c);
    if (T == 0.0) return l0;
    const double x = c.hbar * omega_osc / (2.0 * c.k_B * T);
    return l0 * std::sqrt(1.0 / std::tanh(x));
  }
  if (!(T > 0.0)) throw InvalidConfig("T", "must be > 0");
  return std::sqrt(c.k_B * T / c.m_Cs) / omega_osc;
}

std::vector<PlanePopulation> distribute_planes(long N, double sigma_z,
                                               double lattice_period) {
  if (N <= 0) throw InvalidConfig("N", "must be > 0");
  if (!(lattice_period > 0.0))
    throw InvalidConfig("lattice_period", "must be > 0");
  if (sigma_z == 0.0) return {{0, N}};
  if (!(sigma_z > 0.0)) throw InvalidConfig("sigma_z", "must be >= 0");

  const int J = static_cast<int>(std::ceil(8.0 * sigma_z / lattice_period));
  std::vector<double> w(2 * J + 1);
  for (int j = -J; j <= J; ++j) {
    const double z = j * lattice_period / sigma_z;
    w[j + J] = std::exp(-0.5 * z * z);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  std::vector<long> counts(w.size());
  std::vector<std::pair<double, int>> rem;
  long assigned = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    const double share = N * w[i] / total;
    counts[i] = static_cast<long>(std::floor(share));
    assigned += counts[i];
    rem.emplace_back(share - counts[i], static_cast<int>(i));
  }
  // ties broken towards the centre, then by index, for a symmetric result
  std::stable_sort(rem.begin(), rem.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return std::abs(a.second - J) < std::abs(b.second - J);
  });
  for (long k = 0; k < N - assigned; ++k) ++counts[rem[k].second];

  std::vector<PlanePopulation> out;
  for (int j = -J; j <= J; ++j)
    if (counts[j + J] > 0) out.push_back({j, counts[j + J]});
  return out;
}

MeanDensity mean_density(const std::vector<PlanePopulation>& planes,
                         double sigma_x, double sigma_y, double sigma_well,
                         bool pair_corrected) {
  if (planes.empty()) throw InvalidConfig("planes", "must be non-empty");
  if (!(sigma_x > 0.0 && sigma_y > 0.0 && sigma_well > 0.0))
    throw InvalidConfig("sigma", "cloud sizes must be > 0");

  MeanDensity r;
  r.sigma_x = sigma_x;
  r.sigma_y = sigma_y;
  r.sigma_well = sigma_well;
  const double area = 4.0 * kPi * sigma_x * sigma_y;
  const double depth = 2.0 * std::sqrt(kPi) * sigma_well;

  long N = 0;
  long peak = 0;
  double sum_sq = 0.0;
  for (const auto& p : planes) {
    if (p.atoms < 0) throw InvalidConfig("atoms", "must be >= 0");
    N += p.atoms;
    peak = std::max(peak, p.atoms);
    sum_sq += static_cast<double>(p.atoms) * p.atoms;
  }
  if (N <= 0) throw InvalidConfig("N", "must be > 0");

  double acc2 = 0.0, acc3 = 0.0;
  for (const auto& p : planes) {
    const double partners = pair_corrected ? p.atoms - 1.0 : p.atoms;
    PlaneDensity d{p.index, p.atoms, partners / area,
                   partners / (area * depth)};
    acc2 += p.atoms * d.n_2D;
    acc3 += p.atoms * d.n_bar;
    r.peak_n_2D = std::max(r.peak_n_2D, d.n_2D);
    if (2 * p.atoms >= peak) ++r.fwhm_planes;
    r.planes.push_back(d);
  }
  r.n_2D_bar = acc2 / N;
  r.n_bar = acc3 / N;
  r.participation = static_cast<double>(N) * N / sum_sq;
  return r;
}

MeanDensity mean_density(const CloudShape& cloud, long N,
                         const TrapConfig& trap, double T, const Constants& c,
                         VerticalProfile profile, bool pair_corrected) {
  if (!(T > 0.0)) throw InvalidConfig("T", "must be > 0");
  const double v = std::sqrt(c.k_B * T / c.m_Cs);
  const double sx = cloud.sigma_x > 0.0 ? cloud.sigma_x : v / trap.omega_x;
  const double sy = cloud.sigma_y > 0.0 ? cloud.sigma_y : v / trap.omega_y;
  const auto planes =
      distribute_planes(N, cloud.sigma_z, trap.lattice_period);
  return mean_density(planes, sx, sy,
                      well_rms_width(T, trap.omega_osc, c, profile),
                      pair_corrected);
}

}  // namespace cs2d
