#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "so3seek/errors.hpp"
#include "so3seek/report.hpp"
#include "so3seek/validate.hpp"

using namespace so3seek;
using std::numbers::pi;

namespace {

SimConfig swarm_config() {
  SimConfig cfg;
  cfg.n_agents = 5;
  cfg.speed = 1.0;
  cfg.dt = 0.01;
  cfg.t_end = 2.0;
  cfg.seed = 4;
  cfg.gain_mode = GainMode::kBoundedRate;
  cfg.omega_max = pi / 10;
  cfg.desired.mode = DesiredMode::kPrescribedRates;
  cfg.desired.omega_known = {0.5, 0.2, 0};
  cfg.desired.omega_unknown = {0, 0, pi / 10};
  cfg.placement.radius = 4.0;
  cfg.placement.attitude_spread = 2.0;
  return cfg;
}

SimConfig seeking_config() {
  SimConfig cfg;
  cfg.n_agents = 6;
  cfg.speed = 5.0;
  cfg.dt = 0.005;
  cfg.t_end = 1.0;
  cfg.seed = 2;
  cfg.gain_mode = GainMode::kBoundedRate;
  cfg.omega_max = pi / 4;
  cfg.desired.mode = DesiredMode::kSourceSeeking;
  cfg.desired.frame = RateFrame::kBody;
  cfg.desired.omega_known = {pi, 0, 0};
  cfg.placement.radius = 3.0;
  cfg.placement.attitude_spread = 1.0;
  FieldSpec f;
  f.source = {40, 10, -5};
  f.widths = {30, 25, 20};
  cfg.field = f;
  return cfg;
}

struct LoggedRun {
  std::string table;
  SummaryReport streamed;
};

LoggedRun run_and_log(const SimConfig& cfg) {
  Simulation sim(cfg);
  const RunConstants rc = run_constants("test", sim);
  std::ostringstream out;
  write_step_table_header(out, rc);
  SummaryAccumulator acc(rc);
  sim.run([&](const StepRecord& r) {
    write_step_row(out, r);
    acc.add(r);
  });
  return {out.str(), acc.finish()};
}

}  // namespace

TEST(StepTable, ColumnLayout) {
  const auto cols = step_table_columns(2);
  ASSERT_FALSE(cols.empty());
  EXPECT_EQ(cols.front(), "t");
  EXPECT_EQ(cols[1], "p0_x");
  EXPECT_EQ(cols[4], "R0_00");
  EXPECT_EQ(cols[12], "R0_22");
  EXPECT_EQ(cols[13], "mu0");
  EXPECT_EQ(cols[14], "delta0");
  EXPECT_EQ(cols[15], "p1_x");
  EXPECT_EQ(cols.back(), "heading_held");
}

TEST(StepTable, RoundTripsRecordsExactly) {
  const SimConfig cfg = swarm_config();
  const LoggedRun logged = run_and_log(cfg);
  std::istringstream in(logged.table);
  const StepTable table = read_step_table(in);
  const auto direct = so3seek::run(cfg);
  ASSERT_EQ(table.records.size(), direct.size());
  EXPECT_FALSE(table.aborted);
  EXPECT_EQ(table.constants.n_agents, cfg.n_agents);
  EXPECT_EQ(table.constants.rate_frame, "literal");
  EXPECT_EQ(table.constants.k_w, gain_for_bounded_rate(pi / 10, 0.4));
  for (std::size_t k = 0; k < direct.size(); ++k) {
    EXPECT_EQ(table.records[k].t, direct[k].t);
    for (int i = 0; i < cfg.n_agents; ++i) {
      EXPECT_EQ(table.records[k].p[i], direct[k].p[i]);
      EXPECT_EQ(table.records[k].r[i].matrix(), direct[k].r[i].matrix());
      EXPECT_EQ(table.records[k].mu[i], direct[k].mu[i]);
    }
    EXPECT_EQ(table.records[k].lambda_min, direct[k].lambda_min);
    EXPECT_EQ(table.records[k].epsilon, direct[k].epsilon);
  }
}

TEST(StepTable, SummaryIsRecomputableFromTable) {
  for (const SimConfig& cfg : {swarm_config(), seeking_config()}) {
    const LoggedRun logged = run_and_log(cfg);
    std::istringstream in(logged.table);
    const StepTable table = read_step_table(in);
    const SummaryReport again = summarize(table.constants, table.records);
    EXPECT_EQ(to_json(again).dump(), to_json(logged.streamed).dump());
  }
}

TEST(StepTable, IdenticalRunsGiveIdenticalBytes) {
  EXPECT_EQ(run_and_log(swarm_config()).table, run_and_log(swarm_config()).table);
}

TEST(StepTable, AbortMarkerIsRead) {
  const LoggedRun logged = run_and_log(swarm_config());
  std::ostringstream out;
  out << logged.table;
  write_abort_marker(out, "agent 2 at t = 0.5: log undefined");
  std::istringstream in(out.str());
  EXPECT_TRUE(read_step_table(in).aborted);
}

TEST(StepTable, MalformedInputThrows) {
  std::istringstream empty("");
  EXPECT_THROW(read_step_table(empty), ConfigError);
  const LoggedRun logged = run_and_log(swarm_config());
  std::string broken = logged.table;
  broken.erase(broken.size() - 10);
  broken += ",x\n";
  std::istringstream in(broken);
  EXPECT_THROW(read_step_table(in), ConfigError);
}

// For a constant target mu_k = mu_0 (1 - k dt)^k, so the least-squares slope
// of log mu is exactly log(1 - k dt) / dt.
TEST(Summary, DecaySlopeOfGeometricSequence) {
  SimConfig cfg;
  cfg.n_agents = 1;
  cfg.dt = 0.005;
  cfg.t_end = 8.0;
  cfg.controller.k_w = 2.0;
  cfg.placement.kind = PlacementKind::kExplicit;
  cfg.placement.positions = {Vector3::Zero()};
  cfg.placement.attitude_spread = 2.5;
  const SummaryReport r = run_and_log(cfg).streamed;
  const double expected = std::log(1.0 - 2.0 * 0.005) / 0.005;
  EXPECT_NEAR(r.agents[0].fit.slope, expected, 1e-9);
  EXPECT_NEAR(r.agents[0].slope_rel_error, std::abs(expected + 2.0) / 2.0, 1e-9);
  EXPECT_TRUE(r.flags.decay_slope);
  EXPECT_GE(r.agents[0].final_mu, 0.0);
  EXPECT_LT(r.agents[0].final_mu, 1e-6);
}

TEST(Summary, BoundedRateRunFlags) {
  const SummaryReport r = run_and_log(swarm_config()).streamed;
  EXPECT_TRUE(r.flags.pair_displacement);
  EXPECT_TRUE(r.flags.weyl_chain);
  EXPECT_TRUE(r.flags.trace_guard);
  EXPECT_EQ(r.unknown_rate_violations, 0);
  EXPECT_NEAR(r.pair_displacement_bound, 2.0 * pi / gain_for_bounded_rate(pi / 10, 0.4), 1e-12);
  const auto j = to_json(r);
  EXPECT_TRUE(j.contains("flags"));
  EXPECT_FALSE(j.contains("source"));
  EXPECT_TRUE(j.at("flags").at("source_approach").is_null());
}

TEST(Validate, QuickSuitePasses) {
  ValidateOptions opt;
  opt.samples = 300;
  for (const PropertyResult& r : run_validation(opt)) {
    EXPECT_TRUE(r.passed) << r.name << " worst " << r.worst << " tol " << r.tolerance;
    EXPECT_GT(r.samples, 0) << r.name;
  }
}

// Sign error in the feed-forward term: the decay check must catch it.
TEST(Validate, FlippedFeedForwardFailsDecayCheck) {
  ValidateOptions opt;
  const ControlLaw flipped = [](const Rotation& re, const SkewMatrix& omega_d, double k) {
    return -k * log_matrix(re) - adjoint_rotate(re.transpose(), omega_d);
  };
  EXPECT_TRUE(check_decay_slope(opt).passed);
  const PropertyResult bad = check_decay_slope(opt, flipped);
  EXPECT_FALSE(bad.passed) << "relative slope error " << bad.worst;
}
