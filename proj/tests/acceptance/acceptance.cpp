// Acceptance suite: one PASS/FAIL line per criterion.
//
//   so3seek_acceptance [--scenarios DIR] [--expect-fail N]...
//
// Exit status is 0 when every criterion passes, or when the only failures
// are those named with --expect-fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "so3seek/deployment.hpp"
#include "so3seek/report.hpp"
#include "so3seek/scenario.hpp"
#include "so3seek/sim.hpp"
#include "so3seek/validate.hpp"

using namespace so3seek;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SummaryReport simulate(const std::string& name, const SimConfig& cfg) {
  Simulation sim(cfg);
  SummaryAccumulator acc(run_constants(name, sim));
  try {
    sim.run([&](const StepRecord& r) { acc.add(r); });
  } catch (const NearPiSingularity&) {
    acc.mark_aborted();
  }
  return acc.finish();
}

class Suite {
 public:
  explicit Suite(std::string dir) : dir_(std::move(dir)) {}

  ScenarioFile scenario(const std::string& file) const { return load_scenario(dir_ + "/" + file); }

  // Criterion-3 run, shared by 3, 4 and 6.
  const SummaryReport& fig2_k1() {
    if (!fig2_k1_) {
      const auto t0 = Clock::now();
      fig2_k1_ = simulate("fig2", scenario("fig2.scenario").config);
      fig2_k1_seconds_ = seconds_since(t0);
    }
    return *fig2_k1_;
  }
  double fig2_k1_seconds() const { return fig2_k1_seconds_; }

 private:
  std::string dir_;
  std::optional<SummaryReport> fig2_k1_;
  double fig2_k1_seconds_ = 0.0;
};

Outcome gain_reproduction(Suite& suite) {
  const auto t0 = Clock::now();
  ScenarioFile sc = suite.scenario("fig2.scenario");
  sc.config.gain_mode = GainMode::kManual;
  sc.config.controller.k_w = 1.0;
  const Simulation sim(sc.config);
  const auto& cfg = sim.config();
  const GainPlan plan = plan_gains(cfg.omega_max, cfg.controller.mu_star, cfg.speed, sim.info().initial_stats);
  const double secs = seconds_since(t0);
  const double rel = std::abs(plan.k2 - 413.0) / 413.0;
  const bool ok = plan.k1 >= 0.55 && plan.k1 <= 0.56 && rel <= 0.05 && secs < 1.0;
  return {ok, fmt::format("k1 = {:.4f} in [0.55, 0.56]; k2 = {:.1f}, |k2 - 413|/413 = {:.2f}% <= 5%; {:.3f} s < 1 s",
                          plan.k1, plan.k2, 100.0 * rel, secs)};
}

Outcome decay_law(Suite& suite) {
  const auto t0 = Clock::now();
  const ScenarioFile base = suite.scenario("prop1_smoke.scenario");
  bool ok = true;
  std::string detail;
  for (double k : {0.5, 2.0, 10.0}) {
    SimConfig cfg = base.config;
    cfg.controller.k_w = k;
    cfg.dt = 0.01 / k;  // k dt = 0.01 <= 0.05
    cfg.t_end = 16.0 / k;
    const SummaryReport r = simulate("prop1", cfg);
    const AgentSummary& a = r.agents.at(0);
    const bool pass = a.slope_rel_error <= 0.02 && a.fit.samples > 10 && !r.aborted;
    ok = ok && pass;
    detail += fmt::format("k={} slope {:.4f} (err {:.2f}%); ", k, a.fit.slope, 100.0 * a.slope_rel_error);
  }
  detail += fmt::format("{:.2f} s", seconds_since(t0));
  return {ok, detail};
}

Outcome ultimate_bound(Suite& suite) {
  const SummaryReport& r = suite.fig2_k1();
  const double k = r.constants.k_w;
  const double ceiling = r.constants.delta_star + 5.0 * r.constants.dt * k;
  bool band = !r.aborted;
  bool slope = true;
  std::string slopes;
  for (const AgentSummary& a : r.agents) {
    band = band && a.band_entry_time >= 0.0 && a.max_delta_after_entry <= ceiling;
    slope = slope && a.fit.slope <= -0.9 * k;
    slopes += fmt::format(" {:.3f}", a.fit.slope / k);
  }
  const bool time_ok = suite.fig2_k1_seconds() < 60.0;
  double worst_delta = 0.0;
  for (const AgentSummary& a : r.agents) worst_delta = std::max(worst_delta, a.max_delta_after_entry);
  return {band && slope && time_ok,
          fmt::format("band entered, max delta after entry {:.4f} <= {:.4f} [{}]; fit slope / k_w:{} "
                      "(need <= -0.9) [{}]; {:.2f} s",
                      worst_delta, ceiling, band ? "ok" : "no", slopes, slope ? "ok" : "no",
                      suite.fig2_k1_seconds())};
}

Outcome pair_displacement(Suite& suite) {
  const SummaryReport& r = suite.fig2_k1();
  return {r.max_pair_displacement <= r.pair_displacement_bound && !r.aborted,
          fmt::format("max |p_ij(t) - p_ij(0)| = {:.4f} <= 2 pi s / k_w = {:.4f}", r.max_pair_displacement,
                      r.pair_displacement_bound)};
}

Outcome nondegeneracy(Suite& suite) {
  const auto t0 = Clock::now();
  ScenarioFile sc = suite.scenario("fig2.scenario");
  sc.config.gain_mode = GainMode::kNondegeneracy;
  sc.config.dt = 1e-4;  // k2 dt ~ 0.042 <= 0.05
  const SummaryReport r = simulate("fig2-k2", sc.config);
  const bool ok = r.flags.nondegenerate && r.flags.weyl_chain && !r.aborted;
  return {ok, fmt::format("k_w = k2 = {:.1f}, {} steps; min lambda_min = {:.6f} > 0; min Weyl margin = {:.3e} "
                          ">= -1e-9; {:.1f} s",
                          r.constants.k_w, r.steps, r.min_lambda, r.min_weyl_margin, seconds_since(t0))};
}

Outcome sufficiency_not_necessity(Suite& suite) {
  const SummaryReport& r = suite.fig2_k1();
  return {r.final_lambda > 0.0 && !r.aborted,
          fmt::format("k_w = k1 = {:.4f}: lambda_min(P(T)) = {:.5f} > 0 (min over run {:.5f}, lambda_min(P(0)) = "
                      "{:.5f})",
                      r.constants.k_w, r.final_lambda, r.min_lambda, r.constants.lambda_min0)};
}

Outcome source_seeking(Suite& suite) {
  const auto t0 = Clock::now();
  const ScenarioFile sc = suite.scenario("fig3.scenario");
  const SummaryReport r = simulate("fig3", sc.config);
  const double tol = r.constants.speed * r.constants.dt;
  const bool ok = r.flags.source_approach && !r.aborted;
  return {ok, fmt::format("aligned at t = {:.3f}, within 2D at t = {:.3f}; distance {:.2f} -> {:.2f}; {} increases, "
                          "max {:.3e} <= s dt = {:.3e}; {:.2f} s",
                          r.alignment_time, r.approach_end_time, r.initial_dist_source, r.final_dist_source,
                          r.approach_increases, r.max_approach_increase, tol, seconds_since(t0))};
}

Outcome kernel_properties(Suite&) {
  const auto t0 = Clock::now();
  ValidateOptions opt;
  opt.samples = 10000;
  const std::vector<PropertyResult> results{check_exp_log_roundtrip(opt), check_metric_ordering(opt),
                                            check_ad_invariance(opt),     check_bracket_skew_identity(opt),
                                            check_exp_coord_derivative(opt), check_field_gradients(opt)};
  bool ok = true;
  std::string detail;
  for (const auto& r : results) {
    ok = ok && r.passed && r.samples >= 9999;
    detail += fmt::format("{} {:.1e}/{:.0e}; ", r.name, r.worst, r.tolerance);
  }
  detail += fmt::format("{:.2f} s", seconds_since(t0));
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = SO3SEEK_SCENARIO_DIR;
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--scenarios" && i + 1 < argc) {
      dir = argv[++i];
    } else if (arg == "--expect-fail" && i + 1 < argc) {
      expected_failures.insert(std::stoi(argv[++i]));
    } else {
      fmt::print(stderr, "usage: {} [--scenarios DIR] [--expect-fail N]...\n", argv[0]);
      return 2;
    }
  }

  Suite suite(dir);
  const std::vector<std::pair<std::string, std::function<Outcome(Suite&)>>> criteria{
      {"gain reproduction", gain_reproduction},
      {"constant-target decay law", decay_law},
      {"bounded-rate ultimate bound", ultimate_bound},
      {"pairwise displacement bound", pair_displacement},
      {"non-degeneracy with k_w = k2", nondegeneracy},
      {"k_w = k1 still non-degenerate", sufficiency_not_necessity},
      {"source approach", source_seeking},
      {"kernel property suite", kernel_properties},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome out;
    try {
      out = criteria[i].second(suite);
    } catch (const std::exception& e) {
      out = {false, fmt::format("error: {}", e.what())};
    }
    const bool expected = expected_failures.count(id) > 0;
    const char* tag = out.passed ? "PASS" : (expected ? "FAIL (expected)" : "FAIL");
    fmt::print("{} {}. {}: {}\n", tag, id, criteria[i].first, out.detail);
    std::fflush(stdout);
    if (!out.passed && !expected) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
