#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cs2d/dsmc.hpp"
#include "cs2d/sideband.hpp"
#include "cs2d/trap.hpp"

namespace cs2d {

enum class ScenarioMode {
  classical3d,
  quantized_axial,
  sideband_rate_model,
  analytic_only
};

enum class PhaseKind { cool, free_thermalize, rescale_alpha };

struct Phase {
  PhaseKind kind = PhaseKind::free_thermalize;
  double duration = 0.0;         // s
  double sample_interval = 0.0;  // s; 0: duration / 100
  double alpha_new = 0.0;        // rad, rescale_alpha
  double cooling_rate = 0.0;     // s^-1 per quantum, cool (quantized mode)
};

/// A sweep assigns each value to `parameter`. "T_init" scales all three
/// initial temperatures so that the equilibrium temperature takes the
/// value; "kT_over_hw" does the same in units of hbar omega_osc / k_B; any
/// other name is a dotted key path into the scenario document.
struct Sweep {
  std::string parameter;
  std::vector<double> values;
};

struct DsmcSettings {
  double dt = 0.0;             // s; 0: a fiftieth of the x period
  int planes = 0;              // equally filled planes; 0: from target_tau
  double target_tau = 0.05;    // s, used when planes = 0
  double cell_fraction = 0.25;
  PairSelection selection = PairSelection::ntc;
  double inelastic_weight = 0.5;
  AxialSplit axial_split = AxialSplit::pair_state;
  double quasi2d_rate = 1.0;
};

struct SidebandRow {
  double Gamma_prime = 0.0;
  double detuning_delta = 0.0;
  double sigma_minus_fraction = 0.0;
};

struct SidebandSettings {
  RateModelConfig model;
  double initial_mean_n = 5.8;
  double spread_sigma = 0.0;  // Gaussian detuning spread, rad/s
  int spread_points = 21;
  std::vector<SidebandRow> table;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioMode mode = ScenarioMode::classical3d;
  TrapConfig trap;
  long N = 5000;
  std::array<double, 3> T_init{10e-6, 10e-6, 8e-6};
  std::vector<Phase> schedule;
  std::optional<Sweep> sweep;
  int replicas = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> outputs;  // empty: every column
  DsmcSettings dsmc;
  SidebandSettings sideband;
};

std::string to_string(ScenarioMode m);
std::string to_string(PhaseKind k);

/// Parses a scenario document. Unknown keys are rejected; every error is
/// an InvalidConfig naming the field.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ScenarioConfig& s);

/// Throws InvalidConfig naming the offending field and constraint.
void validate(const ScenarioConfig& s);

/// Sets a dotted key path (e.g. "trap.alpha_deg", "dsmc.planes") in the
/// document from a textual value; numbers, booleans and strings are
/// recognized, and JSON literals (arrays, objects) are parsed.
void apply_override(nlohmann::json& doc, const std::string& key,
                    const std::string& value);

/// The scenario at one sweep value (or the base scenario).
ScenarioConfig sweep_point(const ScenarioConfig& base, double value);

/// FNV-1a 64 of the canonical (key-sorted, compact) dump; independent of
/// field order in the source document.
std::string config_hash(const nlohmann::json& doc);

}  // namespace cs2d
