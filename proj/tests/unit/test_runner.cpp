#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "cs2d/collision_oracles.hpp"
#include "cs2d/csv.hpp"
#include "cs2d/presets.hpp"
#include "cs2d/runner.hpp"

using namespace cs2d;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ScenarioConfig small_classical() {
  return scenario_from_json(json::parse(R"({
    "name": "small", "mode": "classical3d", "N": 400,
    "T_init": [12e-6, 12e-6, 6e-6],
    "schedule": [{"phase": "free_thermalize", "duration": 0.03,
                  "sample_interval": 0.003}],
    "dsmc": {"planes": 2},
    "replicas": 2, "seed": 77
  })"));
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cs2d_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<std::string> files_under(const fs::path& root) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out.insert(fs::relative(e.path(), root).generic_string());
  return out;
}

}  // namespace

TEST(Run, ByteIdenticalOnRepeat) {
  const auto s = small_classical();
  const auto a = scratch("det_a"), b = scratch("det_b");
  RunOptions oa, ob;
  oa.out_dir = a.string();
  ob.out_dir = b.string();
  ob.workers = 2;
  const auto ra = run(s, oa);
  run(s, ob);
  for (const auto& f : ra.manifest.outputs)
    EXPECT_EQ(slurp(a / s.name / f), slurp(b / s.name / f)) << f;
  const json ma = json::parse(slurp(a / s.name / "manifest.json"));
  const json mb = json::parse(slurp(b / s.name / "manifest.json"));
  EXPECT_EQ(ma["derived"], mb["derived"]);
  EXPECT_EQ(ma["config_hash"], mb["config_hash"]);
}

TEST(Run, ManifestListsEveryFile) {
  const auto s = small_classical();
  const auto dir = scratch("manifest");
  RunOptions o;
  o.out_dir = dir.string();
  const auto r = run(s, o);
  const json m = json::parse(slurp(dir / s.name / "manifest.json"));
  for (const char* key : {"config_hash", "seeds", "start_walltime",
                          "end_walltime", "outputs", "version"})
    EXPECT_TRUE(m.contains(key)) << key;
  std::set<std::string> listed(m["outputs"].begin(), m["outputs"].end());
  listed.insert("manifest.json");
  EXPECT_EQ(listed, files_under(dir / s.name));
  EXPECT_EQ(m["seeds"], json({77, 78}));
}

TEST(Run, CsvCarriesMetadataHeader) {
  const auto s = small_classical();
  const auto dir = scratch("header");
  RunOptions o;
  o.out_dir = dir.string();
  const auto r = run(s, o);
  const std::string text = slurp(dir / s.name / r.manifest.outputs.front());
  EXPECT_NE(text.find("# config_hash: " + r.manifest.config_hash), std::string::npos);
  EXPECT_NE(text.find("# seed: 77"), std::string::npos);
  EXPECT_NE(text.find("v_z_rms"), std::string::npos);
}

TEST(Run, SweepPointEqualsSingleRun) {
  ScenarioConfig s = small_classical();
  s.sweep = Sweep{"T_init", {6e-6, 9e-6}};
  RunOptions o;
  o.write_files = false;
  o.keep_replicas = true;
  const auto swept = run(s, o);
  const auto single = run(sweep_point(s, 9e-6), o);
  ASSERT_EQ(swept.points.size(), 2u);
  const auto& a = swept.points[1].replicas;
  const auto& b = single.points[0].replicas;
  ASSERT_EQ(a.size(), b.size());
  for (size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].series.t(), b[r].series.t());
    for (const auto& name : a[r].series.names())
      EXPECT_EQ(a[r].series.column(name), b[r].series.column(name)) << name;
  }
}

TEST(Run, AnalyticSweepIsTheOracleLine) {
  const auto s = scenario_from_json(json::parse(R"({
    "name": "line", "mode": "analytic_only",
    "T_init": 1e-5,
    "sweep": {"parameter": "T_init", "values": [4e-6, 8e-6, 20e-6]}
  })"));
  RunOptions o;
  o.write_files = false;
  const auto r = run(s, o);
  ASSERT_EQ(r.points.size(), 3u);
  const Constants c;
  for (const auto& p : r.points) {
    const double T = p.scalar("T");
    EXPECT_NEAR(p.scalar("observable"),
                analytic_t_therm_classical(1.0, T, c).observable,
                1e-12 * p.scalar("observable"));
  }
}

TEST(Run, SidebandPresetReproducesSteadyState) {
  const auto s = scenario_from_json(preset_document("sideband_steady_state"));
  RunOptions o;
  o.write_files = false;
  const auto r = run(s, o);
  ASSERT_FALSE(r.points.empty());
  EXPECT_NEAR(r.points[0].scalar("p31"), 2.25e-4, 0.05 * 2.25e-4);
}

TEST(Run, TwoStepRescaleRatiosInManifest) {
  auto doc = preset_document("two_step_cooling");
  doc["N"] = 200;
  doc["replicas"] = 1;
  const auto s = scenario_from_json(doc);
  RunOptions o;
  o.write_files = false;
  const auto r = run(s, o);
  const auto& steps = r.manifest.derived.at("rescale");
  ASSERT_EQ(steps.size(), 2u);
  const double d = std::numbers::pi / 180;
  EXPECT_NEAR(steps[0]["omega_z_ratio"].get<double>(),
              std::sqrt(std::cos(63 * d) / std::cos(29 * d)), 1e-14);
  EXPECT_NEAR(steps[0]["omega_x_ratio"].get<double>(), 0.88, 0.005);
  EXPECT_NEAR(steps[0]["omega_z_ratio"].get<double>() *
                  steps[1]["omega_z_ratio"].get<double>(),
              1.0, 1e-12);
}
