#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cs2d/analysis.hpp"
#include "cs2d/dsmc.hpp"
#include "cs2d/scenario.hpp"
#include "cs2d/timeseries.hpp"

namespace cs2d {

const char* version_string();

/// Atom numbers per plane used by a gas scenario: `planes` equally filled
/// planes, or, when 0, as many as give the analytic thermalization time
/// dsmc.target_tau.
std::vector<long> plan_planes(const ScenarioConfig& s, const Constants& c);

/// Equilibrium temperature reached from the scenario's initial one.
double equilibrium_temperature(const ScenarioConfig& s, const Constants& c);

struct ReplicaOutput {
  std::uint64_t seed = 0;
  TimeSeries series;
  CollisionCounters counters;
  double T0 = 0.0;     // equilibrium temperature from the conserved energy
  double n_bar = 0.0;  // pair-corrected mean 3D density at T0
  double n_2D = 0.0;   // pair-corrected mean areal density at T0
  std::vector<std::pair<double, double>> fit_windows;  // free_thermalize
  std::vector<std::pair<double, double>> rescales;     // (omega_z, omega_x) ratios
};

/// One replica of a classical3d or quantized_axial scenario (no sweep).
ReplicaOutput simulate_replica(const ScenarioConfig& s, std::uint64_t seed,
                               const Constants& c = Constants::cesium());

using Scalars = std::vector<std::pair<std::string, double>>;

struct PointResult {
  double sweep_value = 0.0;
  std::string dir;
  TimeSeries aggregate;       // mean of each column over replicas
  TimeSeries aggregate_err;   // standard error of each column
  std::optional<FitResult> fit;
  Scalars scalars;            // one summary row
  std::vector<ReplicaOutput> replicas;

  double scalar(const std::string& name) const;
};

struct RunManifest {
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::string start_walltime;
  std::string end_walltime;
  std::vector<std::string> outputs;
  std::string version;
  nlohmann::json derived;

  nlohmann::json to_json() const;
};

struct RunOptions {
  std::string out_dir = "cs2d_out";
  int workers = 1;
  bool write_files = true;
  bool keep_replicas = false;  // keep per-replica series in the result
};

struct RunResult {
  RunManifest manifest;
  std::vector<PointResult> points;
};

RunResult run(const ScenarioConfig& s, const RunOptions& opt,
              const Constants& c = Constants::cesium());

}  // namespace cs2d
