// so3seek command-line driver.
//
//   so3seek gains <scenario>
//   so3seek simulate <scenario> --out <dir> [--dt X] [--seed N] [--rate-frame literal|body]
//   so3seek validate [--quick] [--samples N]
//
// Exit codes: 0 ok, 1 validation failure, 2 config/hypothesis violation,
// 3 runtime singularity abort.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "so3seek/deployment.hpp"
#include "so3seek/report.hpp"
#include "so3seek/scenario.hpp"
#include "so3seek/sim.hpp"
#include "so3seek/validate.hpp"

namespace fs = std::filesystem;
using namespace so3seek;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSingularity = 3;

int cmd_gains(const std::string& path) {
  ScenarioFile sc = load_scenario(path);
  // Placement only; the gain itself is what we are about to compute.
  sc.config.gain_mode = GainMode::kManual;
  sc.config.controller.k_w = 1.0;
  const Simulation sim(sc.config);
  const DeploymentStats& st = sim.info().initial_stats;
  const auto& cfg = sim.config();
  const GainPlan plan = plan_gains(cfg.omega_max, cfg.controller.mu_star, cfg.speed, st);
  fmt::print("scenario     {}\n", sc.name);
  fmt::print("lambda_min0  {:.4g}\n", st.lambda_min);
  fmt::print("D0           {:.4g}\n", st.radius);
  fmt::print("k1           {:.4g}\n", plan.k1);
  fmt::print("k2           {:.4g}\n", plan.k2);
  fmt::print("epsilon_max  {:.4g}\n", plan.epsilon_max);
  fmt::print("k_w          {:.4g}\n", plan.k_w);
  return kExitOk;
}

int cmd_simulate(const std::string& path, const fs::path& out_dir, std::optional<double> dt,
                 std::optional<std::uint64_t> seed, std::optional<std::string> rate_frame) {
  ScenarioFile sc = load_scenario(path);
  if (dt) sc.config.dt = *dt;
  if (seed) sc.config.seed = *seed;
  if (rate_frame) sc.config.desired.frame = rate_frame_from_string(*rate_frame);

  Simulation sim(sc.config);
  fs::create_directories(out_dir);
  std::ofstream table(out_dir / "steps.csv");
  if (!table) throw ConfigError(fmt::format("cannot write to '{}'", out_dir.string()));

  const RunConstants rc = run_constants(sc.name, sim);
  write_step_table_header(table, rc);
  SummaryAccumulator summary(rc);
  int code = kExitOk;
  try {
    sim.run([&](const StepRecord& rec) {
      write_step_row(table, rec);
      summary.add(rec);
    });
  } catch (const NearPiSingularity& e) {
    write_abort_marker(table, e.what());
    summary.mark_aborted();
    std::cerr << "simulation aborted: " << e.what() << "\n";
    code = kExitSingularity;
  }
  const SummaryReport report = summary.finish();
  std::ofstream(out_dir / "summary.json") << to_json(report).dump(2) << "\n";

  fmt::print("scenario {}: {} steps, k_w = {:.4g}\n", sc.name, report.steps, rc.k_w);
  for (std::size_t i = 0; i < report.agents.size(); ++i) {
    const auto& a = report.agents[i];
    fmt::print("  agent {}: final mu = {:.4g}, final delta = {:.4g}, decay slope = {:.4g}\n", i, a.final_mu,
               a.final_delta, a.fit.slope);
  }
  fmt::print("  min lambda_min(P) = {:.4g}, max pair displacement = {:.4g} (bound {:.4g})\n",
             report.min_lambda, report.max_pair_displacement, report.pair_displacement_bound);
  fmt::print("  wrote {} and {}\n", (out_dir / "steps.csv").string(), (out_dir / "summary.json").string());
  return code;
}

int cmd_validate(bool quick, std::optional<int> samples) {
  ValidateOptions opt;
  if (quick) opt.samples = 200;
  if (samples) opt.samples = *samples;
  const auto results = run_validation(opt);
  bool ok = true;
  fmt::print("{:<58} {:>8} {:>12} {:>10}  {}\n", "property", "samples", "worst", "tolerance", "result");
  for (const auto& r : results) {
    fmt::print("{:<58} {:>8} {:>12.3e} {:>10.1e}  {}\n", r.name, r.samples, r.worst, r.tolerance,
               r.passed ? "PASS" : "FAIL");
    ok = ok && r.passed;
  }
  if (!ok) {
    std::cerr << "failed properties:";
    for (const auto& r : results)
      if (!r.passed) std::cerr << " [" << r.name << "]";
    std::cerr << "\n";
  }
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric attitude control and swarm source-seeking simulator"};
  app.require_subcommand(1);

  std::string scenario;
  auto* gains = app.add_subcommand("gains", "Plan controller gains for a scenario");
  gains->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write the step table and summary");
  std::string out_dir;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> rate_frame;
  simulate->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--dt", dt, "Override the time step");
  simulate->add_option("--seed", seed, "Override the placement seed");
  simulate->add_option("--rate-frame", rate_frame, "Known-rate frame")
      ->check(CLI::IsMember({"literal", "body"}));

  auto* validate = app.add_subcommand("validate", "Run the built-in property suite");
  bool quick = false;
  std::optional<int> samples;
  validate->add_flag("--quick", quick, "Reduced sample counts");
  validate->add_option("--samples", samples, "Samples per property")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gains) return cmd_gains(scenario);
    if (*simulate) return cmd_simulate(scenario, out_dir, dt, seed, rate_frame);
    if (*validate) return cmd_validate(quick, samples);
  } catch (const DegenerateDeployment& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NearPiSingularity& e) {
    std::cerr << "singularity: " << e.what() << "\n";
    return kExitSingularity;
  }
  return kExitOk;
}
