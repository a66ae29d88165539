#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "so3seek/errors.hpp"
#include "so3seek/scenario.hpp"

using namespace so3seek;
using std::numbers::pi;

namespace {

const char* kMinimal = R"(
name: tiny
agents: 3
speed: 2
dt: 0.01
t_end: 1
placement:
  kind: explicit
  positions: [[0, 0, 0], [1, 0, 0], [0, 1, 1]]
desired:
  mode: prescribed-rates
  omega_known: [pi/2, 0, 0]
  omega_unknown: [0, 0, -pi/20]
controller:
  k_w: 1.5
  omega_max: pi/20
)";

}  // namespace

TEST(ParseReal, PiExpressions) {
  EXPECT_EQ(parse_real("1.5"), 1.5);
  EXPECT_EQ(parse_real("-2e-3"), -2e-3);
  EXPECT_EQ(parse_real("pi"), pi);
  EXPECT_EQ(parse_real("-pi/20"), -pi / 20);
  EXPECT_EQ(parse_real("0.5*pi"), 0.5 * pi);
  EXPECT_EQ(parse_real("3pi/4"), 3 * pi / 4);
  EXPECT_THROW(parse_real("tau"), ConfigError);
  EXPECT_THROW(parse_real("pi/0"), ConfigError);
  EXPECT_THROW(parse_real(""), ConfigError);
}

TEST(Scenario, ParsesMinimalFile) {
  const ScenarioFile sc = parse_scenario(kMinimal);
  EXPECT_EQ(sc.name, "tiny");
  EXPECT_EQ(sc.config.n_agents, 3);
  EXPECT_EQ(sc.config.placement.positions.size(), 3u);
  EXPECT_EQ(sc.config.desired.mode, DesiredMode::kPrescribedRates);
  EXPECT_EQ(sc.config.desired.frame, RateFrame::kLiteral);
  EXPECT_EQ(sc.config.desired.omega_known.x(), pi / 2);
  EXPECT_EQ(sc.config.omega_max, pi / 20);
  // mu* falls back to delta*.
  EXPECT_EQ(sc.config.controller.mu_star, sc.config.controller.delta_star);
  EXPECT_FALSE(sc.config.field.has_value());
}

TEST(Scenario, RejectsUnknownKeysWithPath) {
  const std::string bad = std::string(kMinimal) + "  gain: 3\n";
  try {
    parse_scenario(bad);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("controller"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("gain"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_scenario(std::string(kMinimal) + "colour: red\n"), ConfigError);
}

TEST(Scenario, RejectsBadValues) {
  std::string s = kMinimal;
  s.replace(s.find("agents: 3"), 9, "agents: 0");
  EXPECT_THROW(parse_scenario(s), ConfigError);
  s = kMinimal;
  s.replace(s.find("mode: prescribed-rates"), 22, "mode: spinning");
  EXPECT_THROW(parse_scenario(s), ConfigError);
  EXPECT_THROW(parse_scenario("name: [unclosed"), ConfigError);
  EXPECT_THROW(parse_scenario("agents: 2"), ConfigError);
}

TEST(Scenario, RoundTripIsIdempotent) {
  const ScenarioFile sc = parse_scenario(kMinimal);
  const std::string once = emit_scenario(sc);
  const ScenarioFile back = parse_scenario(once);
  EXPECT_EQ(emit_scenario(back), once);
  EXPECT_EQ(back.config.desired.omega_known, sc.config.desired.omega_known);
  EXPECT_EQ(back.config.placement.positions, sc.config.placement.positions);
  EXPECT_EQ(back.config.controller.k_w, sc.config.controller.k_w);
}

TEST(Scenario, ShippedFilesLoadAndRoundTrip) {
  for (const char* name : {"fig2.scenario", "fig3.scenario", "prop1_smoke.scenario"}) {
    const ScenarioFile sc = load_scenario(std::string(SO3SEEK_SCENARIO_DIR) + "/" + name);
    const std::string once = emit_scenario(sc);
    EXPECT_EQ(emit_scenario(parse_scenario(once)), once) << name;
  }
}

TEST(Scenario, ShippedFilesCarryFigureValues) {
  const ScenarioFile f2 = load_scenario(std::string(SO3SEEK_SCENARIO_DIR) + "/fig2.scenario");
  EXPECT_EQ(f2.config.n_agents, 4);
  EXPECT_EQ(f2.config.speed, 0.6);
  EXPECT_EQ(f2.config.omega_max, pi / 20);
  EXPECT_EQ(f2.config.controller.mu_star, 0.4);
  EXPECT_EQ(f2.config.desired.omega_known, Vector3(pi / 2, 0, 0));
  EXPECT_EQ(f2.config.desired.omega_unknown, Vector3(0, 0, -pi / 20));

  const ScenarioFile f3 = load_scenario(std::string(SO3SEEK_SCENARIO_DIR) + "/fig3.scenario");
  EXPECT_EQ(f3.config.n_agents, 10);
  EXPECT_EQ(f3.config.speed, 15.0);
  EXPECT_EQ(f3.config.omega_max, pi / 4);
  EXPECT_EQ(f3.config.desired.omega_known, Vector3(pi, 0, 0));
  ASSERT_TRUE(f3.config.field.has_value());
  EXPECT_EQ(f3.config.field->kind, FieldKind::kGaussian);
}

TEST(Scenario, MissingFile) { EXPECT_THROW(load_scenario("/nonexistent/x.scenario"), ConfigError); }
