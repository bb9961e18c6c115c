#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cs2d/errors.hpp"
#include "cs2d/presets.hpp"
#include "cs2d/scenario.hpp"
#include "cs2d/thermal.hpp"

using namespace cs2d;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "name": "t", "mode": "classical3d", "N": 1000,
    "T_init": [10e-6, 10e-6, 8e-6],
    "schedule": [{"phase": "free_thermalize", "duration": 0.1}]
  })");
}

std::string field_of(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const InvalidConfig& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Scenario, ParsesMinimalDocument) {
  const auto s = scenario_from_json(minimal());
  EXPECT_EQ(s.mode, ScenarioMode::classical3d);
  EXPECT_EQ(s.N, 1000);
  EXPECT_DOUBLE_EQ(s.T_init[2], 8e-6);
  ASSERT_EQ(s.schedule.size(), 1u);
  EXPECT_DOUBLE_EQ(s.schedule[0].duration, 0.1);
  EXPECT_DOUBLE_EQ(s.trap.omega_osc, reference_trap().omega_osc);
}

TEST(Scenario, UnitSuffixes) {
  json d = minimal();
  d["trap"] = {{"omega_osc_hz", 53000}, {"alpha_deg", 29}, {"depth_U0_uK", 100}};
  const auto s = scenario_from_json(d);
  EXPECT_NEAR(s.trap.omega_osc, 2 * std::numbers::pi * 53000, 1e-9);
  EXPECT_NEAR(s.trap.alpha, 29 * std::numbers::pi / 180, 1e-15);
  EXPECT_NEAR(s.trap.depth_U0, 100e-6 * 1.380649e-23, 1e-40);
}

TEST(Scenario, BothSuffixedAndPlainRejected) {
  json d = minimal();
  d["trap"] = {{"alpha", 0.3}, {"alpha_deg", 20}};
  EXPECT_EQ(field_of(d), "trap.alpha");
}

TEST(Scenario, UnknownKeysNamed) {
  json d = minimal();
  d["tempreature"] = 1;
  EXPECT_EQ(field_of(d), "tempreature");
  d = minimal();
  d["dsmc"] = {{"plane", 3}};
  EXPECT_EQ(field_of(d), "dsmc.plane");
}

TEST(Scenario, ValidationNamesFieldAndConstraint) {
  json d = minimal();
  d["schedule"][0]["duration"] = 0;
  EXPECT_EQ(field_of(d), "schedule[0].duration");
  d = minimal();
  d["replicas"] = 0;
  EXPECT_EQ(field_of(d), "replicas");
  d = minimal();
  d["sweep"] = {{"parameter", "T_init"}, {"values", json::array()}};
  EXPECT_EQ(field_of(d), "sweep.values");
  d = minimal();
  d["mode"] = "bogus";
  EXPECT_EQ(field_of(d), "mode");
  d = minimal();
  d["outputs"] = {"v_x_rms", "nonsense"};
  EXPECT_EQ(field_of(d), "outputs");
  d = minimal();
  d["schedule"] = {{{"phase", "cool"}, {"duration", 0.1}}};
  EXPECT_EQ(field_of(d), "schedule[0].phase");
}

TEST(Scenario, RoundTripThroughJson) {
  json d = minimal();
  d["sweep"] = {{"parameter", "T_init"}, {"values", {5e-6, 1e-5}}};
  d["dsmc"] = {{"axial_split", "single_atom"}, {"planes", 4}};
  const auto s = scenario_from_json(d);
  const auto again = scenario_from_json(to_json(s));
  EXPECT_EQ(to_json(again), to_json(s));
  EXPECT_EQ(again.dsmc.axial_split, AxialSplit::single_atom);
}

TEST(Scenario, OverrideDottedPath) {
  json d = minimal();
  apply_override(d, "dsmc.planes", "7");
  apply_override(d, "trap.alpha_deg", "45");
  apply_override(d, "T_init", "[1e-5, 1e-5, 1e-5]");
  apply_override(d, "name", "renamed");
  const auto s = scenario_from_json(d);
  EXPECT_EQ(s.dsmc.planes, 7);
  EXPECT_NEAR(s.trap.alpha, std::numbers::pi / 4, 1e-15);
  EXPECT_DOUBLE_EQ(s.T_init[2], 1e-5);
  EXPECT_EQ(s.name, "renamed");
}

TEST(Scenario, OverrideSuffixReplacesSibling) {
  json d = minimal();
  d["trap"] = {{"alpha", 0.3}};
  apply_override(d, "trap.alpha_deg", "10");
  EXPECT_FALSE(d["trap"].contains("alpha"));
  EXPECT_NO_THROW(scenario_from_json(d));
}

TEST(Scenario, HashStableUnderReordering) {
  const json a = json::parse(R"({"b": 1, "a": {"y": 2, "x": [1, 2]}})");
  const json b = json::parse(R"({"a": {"x": [1, 2], "y": 2}, "b": 1})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  const json c = json::parse(R"({"a": {"x": [2, 1], "y": 2}, "b": 1})");
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Scenario, SweepPointTargetsEquilibriumTemperature) {
  json d = minimal();
  d["sweep"] = {{"parameter", "T_init"}, {"values", {5e-6}}};
  const auto s = scenario_from_json(d);
  const auto p = sweep_point(s, 5e-6);
  EXPECT_FALSE(p.sweep.has_value());
  EXPECT_NEAR((p.T_init[0] + p.T_init[1] + p.T_init[2]) / 3, 5e-6, 1e-15);
  EXPECT_NEAR(p.T_init[2] / p.T_init[0], 0.8, 1e-12);
}

TEST(Scenario, QuantizedSweepUsesLadderEnergy) {
  json d = minimal();
  d["mode"] = "quantized_axial";
  d["T_init"] = {10e-6, 10e-6, 0};
  d["sweep"] = {{"parameter", "kT_over_hw"}, {"values", {0.7}}};
  const auto s = scenario_from_json(d);
  const auto p = sweep_point(s, 0.7);
  const Constants c;
  const double T = 0.7 * c.hbar * s.trap.omega_osc / c.k_B;
  const double goal =
      2 * c.k_B * T + c.hbar * s.trap.omega_osc *
                          thermal_state(T, s.trap.omega_osc, c).mean_n;
  EXPECT_NEAR(c.k_B * (p.T_init[0] + p.T_init[1]) / goal, 1.0, 1e-12);
  EXPECT_EQ(p.T_init[2], 0.0);
}

TEST(Scenario, GenericSweepSetsKeyPath) {
  json d = minimal();
  d["sweep"] = {{"parameter", "dsmc.planes"}, {"values", {3}}};
  const auto p = sweep_point(scenario_from_json(d), 3);
  EXPECT_EQ(p.dsmc.planes, 3);
}

TEST(Presets, AllExpandAndValidate) {
  for (const auto& name : preset_names()) {
    const auto s = scenario_from_json(preset_document(name));
    EXPECT_EQ(s.name, name);
    if (s.sweep) {
      for (double v : s.sweep->values) EXPECT_NO_THROW(sweep_point(s, v));
    }
  }
  EXPECT_THROW(preset_document("nope"), InvalidConfig);
}
