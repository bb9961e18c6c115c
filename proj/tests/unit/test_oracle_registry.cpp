#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cs2d/collision_oracles.hpp"
#include "cs2d/errors.hpp"
#include "cs2d/oracle_registry.hpp"
#include "cs2d/trap.hpp"

using namespace cs2d;

namespace {
double value(const OracleValues& v, const std::string& name) {
  for (const auto& [k, x] : v)
    if (k == name) return x;
  ADD_FAILURE() << "missing " << name;
  return std::nan("");
}
}  // namespace

TEST(OracleRegistry, EveryOracleEvaluatesAtDefaults) {
  for (const auto& o : oracles()) {
    const auto out = evaluate_oracle(o.name, {});
    EXPECT_FALSE(out.empty()) << o.name;
  }
}

TEST(OracleRegistry, SuffixedArguments) {
  const Constants c;
  const auto a = evaluate_oracle("lamb_dicke", {"omega_osc_hz=53000"});
  const auto b = evaluate_oracle("lamb_dicke", {"omega_osc_kHz=53"});
  ASSERT_FALSE(a.empty());
  EXPECT_DOUBLE_EQ(a.front().second, b.front().second);
  EXPECT_NEAR(a.front().second,
              lamb_dicke(2 * std::numbers::pi * 53000, c.lambda_D2, c), 1e-15);
  const auto s = evaluate_oracle("suppression_factor", {"T_uK=3.84"});
  EXPECT_NEAR(s.front().second,
              suppression_factor(3.84e-6, 2 * std::numbers::pi * 80e3, c),
              1e-15);
}

TEST(OracleRegistry, UnknownNameOrArgument) {
  EXPECT_THROW(evaluate_oracle("nope", {}), InvalidConfig);
  EXPECT_THROW(evaluate_oracle("lamb_dicke", {"bogus=1"}), InvalidConfig);
  EXPECT_THROW(evaluate_oracle("lamb_dicke", {"omega_osc"}), InvalidConfig);
}

TEST(OracleRegistry, NumericalFailurePropagates) {
  EXPECT_THROW(evaluate_oracle("cross_section", {"v_rel=0"}), NumericalError);
}

TEST(OracleRegistry, RescaleClosedForms) {
  const auto r = evaluate_oracle("rescale_frequencies",
                                 {"alpha_deg=29", "alpha_new_deg=63"});
  const double d = std::numbers::pi / 180;
  EXPECT_NEAR(value(r, "omega_z_ratio"),
              std::sqrt(std::cos(63 * d) / std::cos(29 * d)), 1e-14);
  EXPECT_NEAR(value(r, "omega_x_ratio"),
              std::sqrt((1 + std::cos(63 * d)) / (1 + std::cos(29 * d))), 1e-14);
}
