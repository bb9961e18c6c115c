#include "cs2d/dsmc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cs2d/collision_oracles.hpp"
#include "cs2d/errors.hpp"

namespace cs2d {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<double, 3> frequencies(const TrapConfig& trap) {
  return {trap.omega_x, trap.omega_y, trap.omega_osc};
}

bool finite(const Particle& p) {
  for (int a = 0; a < 3; ++a)
    if (!std::isfinite(p.r[a]) || !std::isfinite(p.v[a])) return false;
  return true;
}

constexpr int kPlaneBits = 14;
constexpr int kAxisBits = 10;
constexpr int kIndexBits = 20;
constexpr int kAxisCells = 1 << kAxisBits;
constexpr int kPlaneOffset = 1 << (kPlaneBits - 1);

}  // namespace

void validate(const GasState& s) {
  for (std::size_t i = 0; i < s.particles.size(); ++i) {
    const auto& p = s.particles[i];
    const std::string where = "particles[" + std::to_string(i) + "]";
    if (!finite(p)) throw NumericalError(where + ": non-finite component");
    if (s.mode == GasMode::quantized_axial) {
      if (!p.has_axial())
        throw InvalidConfig(where + ".axial_n", "required in quantized mode");
      if (p.r[2] != 0.0 || p.v[2] != 0.0)
        throw InvalidConfig(where + ".z", "must be zero in quantized mode");
    } else if (p.has_axial()) {
      throw InvalidConfig(where + ".axial_n", "absent in classical mode");
    }
  }
}

double axis_energy(const Particle& p, int axis, const TrapConfig& trap,
                   const Constants& c) {
  const double w = frequencies(trap)[axis];
  return 0.5 * c.m_Cs *
         (p.v[axis] * p.v[axis] + w * w * p.r[axis] * p.r[axis]);
}

double total_energy(const GasState& s, const Constants& c) {
  double e = 0.0;
  for (const auto& p : s.particles) {
    for (int a = 0; a < 3; ++a) e += axis_energy(p, a, s.trap, c);
    if (p.has_axial()) e += c.hbar * s.trap.omega_osc * p.axial_n;
  }
  return e;
}

std::array<double, 3> total_momentum(const GasState& s, const Constants& c) {
  std::array<double, 3> P{};
  for (const auto& p : s.particles)
    for (int a = 0; a < 3; ++a) P[a] += c.m_Cs * p.v[a];
  return P;
}

void advance_free(GasState& s, double dt) {
  if (!(dt > 0.0)) throw InvalidConfig("dt", "must be > 0");
  const auto w = frequencies(s.trap);
  const int axes = s.mode == GasMode::quantized_axial ? 2 : 3;
  std::array<double, 3> co{}, si{};
  for (int a = 0; a < axes; ++a) {
    co[a] = std::cos(w[a] * dt);
    si[a] = std::sin(w[a] * dt);
  }
  for (auto& p : s.particles) {
    for (int a = 0; a < axes; ++a) {
      const double x = p.r[a], v = p.v[a];
      p.r[a] = x * co[a] + v / w[a] * si[a];
      p.v[a] = v * co[a] - x * w[a] * si[a];
    }
  }
  s.t += dt;
}

GasState advanced(const GasState& s, double dt) {
  GasState out = s;
  advance_free(out, dt);
  return out;
}

GasState sample_thermal_gas(const TrapConfig& trap, GasMode mode,
                            const std::vector<long>& plane_counts,
                            const std::array<double, 3>& T, Rng& rng,
                            const Constants& c) {
  validate(trap);
  for (double t : T)
    if (!(t >= 0.0)) throw InvalidConfig("T", "must be >= 0");
  GasState s;
  s.trap = trap;
  s.mode = mode;
  const auto w = frequencies(trap);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  const double xz =
      T[2] > 0.0 ? std::exp(-c.hbar * trap.omega_osc / (c.k_B * T[2])) : 0.0;

  for (std::size_t plane = 0; plane < plane_counts.size(); ++plane) {
    if (plane_counts[plane] < 0)
      throw InvalidConfig("plane_counts", "must be >= 0");
    for (long i = 0; i < plane_counts[plane]; ++i) {
      Particle p;
      p.plane = static_cast<int>(plane);
      const int axes = mode == GasMode::quantized_axial ? 2 : 3;
      for (int a = 0; a < axes; ++a) {
        const double vs = std::sqrt(c.k_B * T[a] / c.m_Cs);
        p.r[a] = vs / w[a] * normal(rng);
        p.v[a] = vs * normal(rng);
      }
      if (mode == GasMode::quantized_axial) {
        int n = 0;
        if (xz > 0.0) {
          const double u = 1.0 - uniform(rng);  // (0, 1]
          n = static_cast<int>(std::floor(std::log(u) / std::log(xz)));
        }
        p.axial_n = n;
      }
      s.particles.push_back(p);
    }
  }
  if (s.particles.size() >= (std::size_t{1} << kIndexBits))
    throw InvalidConfig("N", "at most 2^20 - 1 particles");
  if (plane_counts.size() >= (std::size_t{1} << kPlaneBits))
    throw InvalidConfig("planes", "at most 2^14 - 1 planes");
  return s;
}

void scatter_isotropic_3d(Particle& a, Particle& b, Rng& rng) {
  std::uniform_real_distribution<double> uniform;
  double g2 = 0.0;
  std::array<double, 3> V{};
  for (int k = 0; k < 3; ++k) {
    const double d = a.v[k] - b.v[k];
    g2 += d * d;
    V[k] = 0.5 * (a.v[k] + b.v[k]);
  }
  const double g = std::sqrt(g2);
  const double cth = 2.0 * uniform(rng) - 1.0;
  const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
  const double phi = 2.0 * kPi * uniform(rng);
  const std::array<double, 3> gn{g * sth * std::cos(phi),
                                 g * sth * std::sin(phi), g * cth};
  for (int k = 0; k < 3; ++k) {
    a.v[k] = V[k] + 0.5 * gn[k];
    b.v[k] = V[k] - 0.5 * gn[k];
  }
}

void scatter_isotropic_2d(Particle& a, Particle& b, double g_new, Rng& rng) {
  std::uniform_real_distribution<double> uniform;
  const double phi = 2.0 * kPi * uniform(rng);
  const double gx = g_new * std::cos(phi), gy = g_new * std::sin(phi);
  const double Vx = 0.5 * (a.v[0] + b.v[0]);
  const double Vy = 0.5 * (a.v[1] + b.v[1]);
  a.v[0] = Vx + 0.5 * gx;
  a.v[1] = Vy + 0.5 * gy;
  b.v[0] = Vx - 0.5 * gx;
  b.v[1] = Vy - 0.5 * gy;
}

AxialOutcome collide_axial_pair(Particle& a, Particle& b, double weight,
                                double hbar_omega, double mass, Rng& rng,
                                AxialSplit split) {
  std::uniform_real_distribution<double> uniform;
  const double gx = a.v[0] - b.v[0], gy = a.v[1] - b.v[1];
  const double g2 = gx * gx + gy * gy;
  const double dg2 = 8.0 * hbar_omega / mass;  // 2 hbar w of (m/4) g^2

  const double u = uniform(rng);
  const double share = uniform(rng);
  int da = 1, db = 1;
  if (split == AxialSplit::single_atom)
    share < 0.5 ? (da = 2, db = 0) : (da = 0, db = 2);
  else if (share < 0.25)
    da = 2, db = 0;
  else if (share < 0.5)
    da = 0, db = 2;

  if (u < weight) {
    if (g2 >= dg2) {
      a.axial_n += da;
      b.axial_n += db;
      scatter_isotropic_2d(a, b, std::sqrt(g2 - dg2), rng);
      return AxialOutcome::excite;
    }
  } else if (u < 2.0 * weight) {
    if (a.axial_n >= da && b.axial_n >= db) {
      a.axial_n -= da;
      b.axial_n -= db;
      scatter_isotropic_2d(a, b, std::sqrt(g2 + dg2), rng);
      return AxialOutcome::deexcite;
    }
  }
  scatter_isotropic_2d(a, b, std::sqrt(g2), rng);
  return AxialOutcome::elastic;
}

Moments moments(const GasState& s) {
  Moments m;
  m.t = s.t;
  m.N = s.particles.size();
  if (m.N == 0) return m;
  long ground = 0;
  double axial = 0.0;
  for (const auto& p : s.particles) {
    for (int a = 0; a < 3; ++a) {
      m.v_rms[a] += p.v[a] * p.v[a];
      m.x_rms[a] += p.r[a] * p.r[a];
    }
    if (p.has_axial()) {
      axial += p.axial_n;
      ground += p.axial_n == 0;
    }
  }
  for (int a = 0; a < 3; ++a) {
    m.v_rms[a] = std::sqrt(m.v_rms[a] / m.N);
    m.x_rms[a] = std::sqrt(m.x_rms[a] / m.N);
  }
  m.mean_axial_n = axial / m.N;
  m.ground_fraction = static_cast<double>(ground) / m.N;
  return m;
}

DsmcEngine::DsmcEngine(GasState state, DsmcConfig cfg, const Constants& c)
    : state_(std::move(state)), cfg_(cfg), c_(c),
      rng_(make_rng(state_.rng_seed)) {
  validate(state_);
  validate(state_.trap);
  if (!(cfg_.cell_fraction > 0.0))
    throw InvalidConfig("cell_fraction", "must be > 0");
  if (!(cfg_.inelastic_weight >= 0.0 && cfg_.inelastic_weight <= 0.5))
    throw InvalidConfig("inelastic_weight", "must lie in [0, 0.5]");
  if (!(cfg_.max_pair_probability > 0.0 && cfg_.max_pair_probability < 1.0))
    throw InvalidConfig("max_pair_probability", "must lie in (0, 1)");
  if (state_.particles.size() >= (std::size_t{1} << kIndexBits))
    throw InvalidConfig("N", "at most 2^20 - 1 particles");
  configure();
}

void DsmcEngine::set_trap(const TrapConfig& trap) {
  validate(trap);
  state_.trap = trap;
  configure();
}

void DsmcEngine::configure() {
  const bool quantized = state_.mode == GasMode::quantized_axial;
  k_min_ = cfg_.k_min > 0.0 ? cfg_.k_min
                            : default_k_min(state_.trap.omega_osc, c_);
  majorant_ = quantized ? cfg_.quasi2d_rate * c_.hbar / c_.m_Cs
                        : sigma_g_majorant(k_min_, c_);

  if (cfg_.geometry == Geometry::periodic_box) {
    if (quantized)
      throw UnsupportedConfiguration("periodic_box is classical3d only");
    if (!(cfg_.box_length > 0.0))
      throw InvalidConfig("box_length", "must be > 0");
    if (cfg_.box_cells < 1 || cfg_.box_cells > kAxisCells)
      throw InvalidConfig("box_cells", "must lie in [1, 1024]");
    const double h = cfg_.box_length / cfg_.box_cells;
    cell_volume_ = h * h * h;
    inv_cell_ = {1.0 / h, 1.0 / h, 1.0 / h};
    return;
  }

  double T = cfg_.T_cells;
  if (!(T > 0.0)) {
    double s2 = 0.0;
    for (const auto& p : state_.particles)
      s2 += p.v[0] * p.v[0] + p.v[1] * p.v[1];
    T = state_.particles.empty()
            ? 0.0
            : c_.m_Cs * s2 / (2.0 * state_.particles.size() * c_.k_B);
  }
  if (!(T > 0.0))
    throw InvalidConfig("T_cells", "cannot infer a cell scale from a cold gas");
  const double vs = std::sqrt(c_.k_B * T / c_.m_Cs);
  const auto w = frequencies(state_.trap);
  cell_volume_ = 1.0;
  const int axes = quantized ? 2 : 3;
  for (int a = 0; a < axes; ++a) {
    const double h = cfg_.cell_fraction * vs / w[a];
    cell_volume_ *= h;
    inv_cell_[a] = 1.0 / h;
  }
}

double DsmcEngine::max_collision_dt() const {
  return cfg_.max_pair_probability * cell_volume_ / majorant_;
}

void DsmcEngine::advance_free(double dt) {
  if (cfg_.geometry == Geometry::harmonic) {
    cs2d::advance_free(state_, dt);
    return;
  }
  if (!(dt > 0.0)) throw InvalidConfig("dt", "must be > 0");
  const double L = cfg_.box_length;
  for (auto& p : state_.particles)
    for (int a = 0; a < 3; ++a) {
      double x = std::fmod(p.r[a] + p.v[a] * dt, L);
      if (x < 0.0) x += L;
      p.r[a] = x;
    }
  state_.t += dt;
}

std::uint64_t DsmcEngine::cell_key(const Particle& p,
                                   std::uint32_t index) const {
  std::uint64_t key = static_cast<std::uint64_t>(p.plane + kPlaneOffset);
  const bool quantized = state_.mode == GasMode::quantized_axial;
  for (int a = 0; a < 3; ++a) {
    long i = 0;
    if (!(quantized && a == 2)) {
      const double s = p.r[a] * inv_cell_[a];
      if (cfg_.geometry == Geometry::harmonic)
        i = static_cast<long>(std::floor(s)) + kAxisCells / 2;
      else
        i = static_cast<long>(s);
      i = std::clamp(i, 0L, static_cast<long>(kAxisCells - 1));
    }
    key = (key << kAxisBits) | static_cast<std::uint64_t>(i);
  }
  return (key << kIndexBits) | index;
}

void DsmcEngine::build_cells() {
  const auto n = static_cast<std::uint32_t>(state_.particles.size());
  keys_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i)
    keys_[i] = cell_key(state_.particles[i], i);
  std::sort(keys_.begin(), keys_.end());
  cell_start_.clear();
  for (std::uint32_t i = 0; i < n; ++i)
    if (i == 0 || (keys_[i] >> kIndexBits) != (keys_[i - 1] >> kIndexBits))
      cell_start_.push_back(i);
  cell_start_.push_back(n);
}

template <class Kernel>
std::uint64_t DsmcEngine::collide_cells(double dt, Kernel&& kernel) {
  build_cells();
  constexpr std::uint64_t mask = (std::uint64_t{1} << kIndexBits) - 1;
  std::uniform_real_distribution<double> uniform;
  std::uint64_t events = 0;
  const double pair_p = majorant_ * dt / cell_volume_;

  for (std::size_t c = 0; c + 1 < cell_start_.size(); ++c) {
    const std::uint32_t lo = cell_start_[c], hi = cell_start_[c + 1];
    const std::uint32_t nc = hi - lo;
    if (nc < 2) continue;
    auto particle = [&](std::uint32_t k) -> Particle& {
      return state_.particles[keys_[lo + k] & mask];
    };

    if (cfg_.selection == PairSelection::exhaustive) {
      for (std::uint32_t i = 0; i < nc; ++i)
        for (std::uint32_t j = i + 1; j < nc; ++j) {
          ++counters_.candidates;
          events += kernel(particle(i), particle(j), dt / cell_volume_, true);
        }
      continue;
    }

    const double expected = 0.5 * nc * (nc - 1.0) * pair_p;
    auto count = static_cast<std::uint64_t>(expected);
    if (uniform(rng_) < expected - static_cast<double>(count)) ++count;
    std::uniform_int_distribution<std::uint32_t> pick(0, nc - 1);
    for (std::uint64_t k = 0; k < count; ++k) {
      const std::uint32_t i = pick(rng_);
      std::uint32_t j = pick(rng_);
      while (j == i) j = pick(rng_);
      ++counters_.candidates;
      events += kernel(particle(i), particle(j), dt / cell_volume_, false);
    }
  }
  counters_.collisions += events;
  return events;
}

std::uint64_t DsmcEngine::collide_classical(double dt) {
  if (state_.mode != GasMode::classical3d)
    throw UnsupportedConfiguration("collide_classical needs classical3d");
  std::uniform_real_distribution<double> uniform;
  const double S = majorant_;
  auto kernel = [&](Particle& a, Particle& b, double dt_per_volume,
                    bool exhaustive) -> std::uint64_t {
    double g2 = 0.0;
    for (int k = 0; k < 3; ++k) g2 += (a.v[k] - b.v[k]) * (a.v[k] - b.v[k]);
    const double g = std::sqrt(g2);
    const double sg = g > 0.0 ? capped_cross_section(g, k_min_, c_) * g : 0.0;
    if (sg > S * (1.0 + 1e-12))
      throw MajorantOverflow("sigma g exceeds the collision majorant");
    const bool accept = exhaustive ? uniform(rng_) < sg * dt_per_volume
                                   : uniform(rng_) * S < sg;
    if (!accept) return 0;
    CollisionEvent ev;
    if (hook_) ev.before[0] = a, ev.before[1] = b;
    scatter_isotropic_3d(a, b, rng_);
    if (hook_) {
      ev.after[0] = a, ev.after[1] = b;
      hook_(ev);
    }
    return 1;
  };
  return collide_cells(dt, kernel);
}

std::uint64_t DsmcEngine::collide_quantized(double dt) {
  if (state_.mode != GasMode::quantized_axial)
    throw UnsupportedConfiguration("collide_quantized needs quantized_axial");
  std::uniform_real_distribution<double> uniform;
  const double hw = c_.hbar * state_.trap.omega_osc;
  const double threshold_g2 = 8.0 * hw / c_.m_Cs;
  const double w = majorant_;
  auto kernel = [&](Particle& a, Particle& b, double dt_per_area,
                    bool exhaustive) -> std::uint64_t {
    if (exhaustive && !(uniform(rng_) < w * dt_per_area)) return 0;
    const double gx = a.v[0] - b.v[0], gy = a.v[1] - b.v[1];
    if (gx * gx + gy * gy >= threshold_g2) ++counters_.above_threshold;
    CollisionEvent ev;
    if (hook_) ev.before[0] = a, ev.before[1] = b;
    ev.outcome = collide_axial_pair(a, b, cfg_.inelastic_weight, hw, c_.m_Cs,
                                    rng_, cfg_.axial_split);
    if (ev.outcome == AxialOutcome::excite) ++counters_.excitations;
    if (ev.outcome == AxialOutcome::deexcite) ++counters_.deexcitations;
    if (hook_) {
      ev.after[0] = a, ev.after[1] = b;
      hook_(ev);
    }
    return 1;
  };
  return collide_cells(dt, kernel);
}

void DsmcEngine::step(double dt) {
  if (!(dt > 0.0)) throw InvalidConfig("dt", "must be > 0");
  const double limit = max_collision_dt();
  const auto n_sub = static_cast<long>(std::ceil(dt / limit - 1e-12));
  const long subs = std::max(1L, n_sub);
  const double h = dt / subs;
  for (long k = 0; k < subs; ++k) {
    std::vector<Particle> backup = state_.particles;
    const double t0 = state_.t;
    const Rng rng_backup = rng_;
    const CollisionCounters counters_backup = counters_;
    try {
      advance_free(h);
      if (state_.mode == GasMode::classical3d)
        collide_classical(h);
      else
        collide_quantized(h);
      ++counters_.substeps;
    } catch (const MajorantOverflow&) {
      state_.particles = std::move(backup);
      state_.t = t0;
      rng_ = rng_backup;
      counters_ = counters_backup;
      ++counters_.retries;
      if (h < 1e-12 * dt)
        throw NumericalError("step: majorant overflow persists at tiny dt");
      step(0.5 * h);
      step(0.5 * h);
    }
  }
}

}  // namespace cs2d
