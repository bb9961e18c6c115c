#include "cs2d/presets.hpp"

#include <map>

#include "cs2d/errors.hpp"

namespace cs2d {

namespace {

const std::map<std::string, const char*>& documents() {
  static const std::map<std::string, const char*> docs = {
      {"fig7_sweep", R"({
  "name": "fig7_sweep",
  "mode": "classical3d",
  "N": 5000,
  "T_init": [10e-6, 10e-6, 8e-6],
  "sweep": {"parameter": "T_init", "values": [5e-6, 10e-6, 20e-6]},
  "schedule": [
    {"phase": "free_thermalize", "duration": 0.2, "sample_interval": 0.002}
  ],
  "dsmc": {"target_tau": 0.05},
  "replicas": 20,
  "seed": 1001
})"},
      {"fig8_relax", R"({
  "name": "fig8_relax",
  "mode": "classical3d",
  "N": 5000,
  "T_init": [10e-6, 10e-6, 8e-6],
  "schedule": [
    {"phase": "free_thermalize", "duration": 0.2, "sample_interval": 0.002}
  ],
  "dsmc": {"target_tau": 0.05},
  "replicas": 20,
  "seed": 1002
})"},
      {"freezeout_demo", R"({
  "name": "freezeout_demo",
  "mode": "quantized_axial",
  "N": 4000,
  "T_init": [10e-6, 10e-6, 0],
  "sweep": {"parameter": "kT_over_hw", "values": [0.5, 0.7, 1.0, 1.5, 2.0, 3.0]},
  "schedule": [
    {"phase": "free_thermalize", "duration": 0.3, "sample_interval": 0.003}
  ],
  "dsmc": {"target_tau": 0.003},
  "replicas": 8,
  "seed": 1003
})"},
      {"two_step_cooling", R"({
  "name": "two_step_cooling",
  "mode": "quantized_axial",
  "N": 2000,
  "trap": {"alpha_deg": 29},
  "T_init": [10e-6, 10e-6, 2e-6],
  "schedule": [
    {"phase": "rescale_alpha", "alpha_new_deg": 63, "duration": 0.005},
    {"phase": "cool", "duration": 0.02, "cooling_rate": 400},
    {"phase": "free_thermalize", "duration": 0.05},
    {"phase": "rescale_alpha", "alpha_new_deg": 29, "duration": 0.005}
  ],
  "dsmc": {"target_tau": 0.02},
  "replicas": 4,
  "seed": 1004
})"},
      {"sideband_steady_state", R"({
  "name": "sideband_steady_state",
  "mode": "sideband_rate_model",
  "sideband": {
    "omega_osc_hz": 80000,
    "Omega_R_hz": 5000,
    "Gamma_prime_hz": 4800,
    "zeeman_splitting_hz": 80000,
    "parity": "odd",
    "n_max": 40,
    "eta": 0.16,
    "initial_mean_n": 5.8,
    "spread_sigma_hz": 6000,
    "spread_points": 21,
    "table": [
      {"Gamma_prime_hz": 4800},
      {"Gamma_prime_hz": 4800, "detuning_delta_hz": 12000},
      {"Gamma_prime_hz": 4800, "sigma_minus_fraction": 0.01},
      {"Gamma_prime_hz": 2400},
      {"Gamma_prime_hz": 8000}
    ]
  },
  "schedule": [
    {"phase": "cool", "duration": 0.0005, "sample_interval": 0.000005}
  ],
  "seed": 1005
})"},
  };
  return docs;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : documents()) out.push_back(k);
  return out;
}

nlohmann::json preset_document(const std::string& name) {
  const auto& docs = documents();
  const auto it = docs.find(name);
  if (it == docs.end()) {
    std::string known;
    for (const auto& [k, v] : docs) known += (known.empty() ? "" : ", ") + k;
    throw InvalidConfig("preset", "unknown name '" + name + "' (known: " +
                                      known + ")");
  }
  return nlohmann::json::parse(it->second);
}

}  // namespace cs2d
