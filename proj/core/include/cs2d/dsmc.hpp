#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "cs2d/rng.hpp"
#include "cs2d/trap.hpp"

namespace cs2d {

enum class GasMode { classical3d, quantized_axial };

/// One atom. `plane` is its lattice micro-well; r[2] is the position
/// inside that well. In quantized-axial mode r[2] and v[2] are zero and
/// the vertical motion lives in `axial_n`; otherwise axial_n is -1.
struct Particle {
  std::array<double, 3> r{};
  std::array<double, 3> v{};
  int plane = 0;
  int axial_n = -1;

  bool has_axial() const { return axial_n >= 0; }
};

struct GasState {
  std::vector<Particle> particles;
  TrapConfig trap;
  double t = 0.0;
  GasMode mode = GasMode::classical3d;
  std::uint64_t rng_seed = 0;
};

/// Checks the per-particle invariants of `mode` and finiteness.
void validate(const GasState& state);

/// Trap energy of one axis, m (v^2 + omega^2 r^2) / 2.
double axis_energy(const Particle& p, int axis, const TrapConfig& trap,
                   const Constants& c);

/// Total energy: kinetic + harmonic, plus hbar omega_osc axial_n.
double total_energy(const GasState& state, const Constants& c);
std::array<double, 3> total_momentum(const GasState& state,
                                     const Constants& c);

/// Exact harmonic propagation: each axis is rotated in phase space by
/// omega dt. Quantized axes are left alone.
void advance_free(GasState& state, double dt);
GasState advanced(const GasState& state, double dt);

/// Samples a thermal gas with per-axis temperatures; `plane_counts` gives
/// the number of atoms per plane. In quantized-axial mode T_z sets the
/// Boltzmann ladder of axial_n.
GasState sample_thermal_gas(const TrapConfig& trap, GasMode mode,
                            const std::vector<long>& plane_counts,
                            const std::array<double, 3>& T, Rng& rng,
                            const Constants& c);

/// Keeps the centre-of-mass velocity and |v_rel|, redraws the direction
/// of v_rel uniformly on the sphere.
void scatter_isotropic_3d(Particle& a, Particle& b, Rng& rng);

/// As scatter_isotropic_3d in the horizontal plane, with the relative
/// speed set to `g_new`.
void scatter_isotropic_2d(Particle& a, Particle& b, double g_new, Rng& rng);

enum class AxialOutcome { elastic, excite, deexcite };

/// How two axial quanta are shared between the atoms of a pair.
/// pair_state: (2,0), (0,2), (1,1) with probabilities 1/4, 1/4, 1/2, the
/// single-atom content of the relative state |n_rel = 2, N_cm = 0>.
/// single_atom: one atom takes both, (2,0) or (0,2); each atom's parity
/// is then conserved.
enum class AxialSplit { pair_state, single_atom };

/// Quantized collision channel. With probability `weight` each the pair
/// tries to gain or to lose two axial quanta, shared according to `split`.
/// Channels that are energetically closed or would make axial_n negative
/// fall back to elastic scattering. The horizontal relative kinetic energy
/// absorbs the change.
AxialOutcome collide_axial_pair(Particle& a, Particle& b, double weight,
                                double hbar_omega, double mass, Rng& rng,
                                AxialSplit split = AxialSplit::pair_state);

enum class PairSelection { ntc, exhaustive };
enum class Geometry { harmonic, periodic_box };

struct DsmcConfig {
  PairSelection selection = PairSelection::ntc;
  Geometry geometry = Geometry::harmonic;
  double cell_fraction = 0.25;  // cell width per axis, in cloud rms units
  double T_cells = 0.0;         // temperature setting the cell scale; 0: from state
  double box_length = 0.0;      // periodic_box side
  int box_cells = 8;            // periodic_box cells per axis
  double k_min = 0.0;           // 0: 1 / (2 l0)
  double inelastic_weight = 0.5;
  AxialSplit axial_split = AxialSplit::pair_state;
  double quasi2d_rate = 1.0;    // pair rate per area = quasi2d_rate hbar / m
  double max_pair_probability = 0.1;
};

struct CollisionCounters {
  std::uint64_t candidates = 0;
  std::uint64_t collisions = 0;
  std::uint64_t above_threshold = 0;  // quantized: horizontal KE >= 2 hbar w
  std::uint64_t excitations = 0;
  std::uint64_t deexcitations = 0;
  std::uint64_t retries = 0;
  std::uint64_t substeps = 0;
};

struct CollisionEvent {
  Particle before[2];
  Particle after[2];
  AxialOutcome outcome = AxialOutcome::elastic;
};

struct Moments {
  double t = 0.0;
  std::array<double, 3> v_rms{};
  std::array<double, 3> x_rms{};
  double mean_axial_n = 0.0;
  double ground_fraction = 0.0;
  std::size_t N = 0;
};

Moments moments(const GasState& state);

class DsmcEngine {
public:
  DsmcEngine(GasState state, DsmcConfig cfg,
             const Constants& c = Constants::cesium());

  const GasState& state() const { return state_; }
  /// For external processes (cooling, adiabatic rescaling) between steps.
  GasState& mutable_state() { return state_; }
  const DsmcConfig& config() const { return cfg_; }
  const CollisionCounters& counters() const { return counters_; }
  Rng& rng() { return rng_; }

  void advance_free(double dt);
  std::uint64_t collide_classical(double dt);
  std::uint64_t collide_quantized(double dt);

  /// advance_free then collide, split into sub-steps so that the largest
  /// per-pair collision probability stays below max_pair_probability; on a
  /// MajorantOverflow the step is undone and retried at half the step.
  void step(double dt);

  /// Swaps in a new trap and recomputes cells and majorant.
  void set_trap(const TrapConfig& trap);

  double majorant() const { return majorant_; }
  double cell_volume() const { return cell_volume_; }
  /// Largest step for which the per-pair probability bound holds.
  double max_collision_dt() const;

  void set_event_hook(std::function<void(const CollisionEvent&)> hook) {
    hook_ = std::move(hook);
  }

private:
  template <class Kernel>
  std::uint64_t collide_cells(double dt, Kernel&& kernel);
  void configure();
  void build_cells();
  std::uint64_t cell_key(const Particle& p, std::uint32_t index) const;

  GasState state_;
  DsmcConfig cfg_;
  Constants c_;
  Rng rng_;
  CollisionCounters counters_;
  std::function<void(const CollisionEvent&)> hook_;

  double k_min_ = 0.0;
  double majorant_ = 0.0;
  double cell_volume_ = 0.0;
  std::array<double, 3> inv_cell_{};
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> cell_start_;
};

}  // namespace cs2d
