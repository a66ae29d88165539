#pragma once

// Step-table serialization and the run summary derived from it.
//
// Step table: comma-separated text. Leading `#` lines carry the run
// constants (`# key = value`) and document the column order; the first
// non-comment line is the header row. Rotations are flattened row-major.
// Everything in the summary is recomputable from the table alone, see
// read_step_table().

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "so3seek/sim.hpp"

namespace so3seek {

/// Run constants needed to evaluate every summary property.
struct RunConstants {
  std::string scenario;
  int n_agents = 0;
  double speed = 0.0;
  double dt = 0.0;
  double k_w = 0.0;
  double mu_star = 0.0;
  double delta_star = 0.0;
  double omega_max = 0.0;
  double lambda_min0 = 0.0;
  double radius0 = 0.0;
  bool has_field = false;
  std::string rate_frame = "literal";
  double k1 = std::numeric_limits<double>::quiet_NaN();
  double k2 = std::numeric_limits<double>::quiet_NaN();
  double epsilon_max = std::numeric_limits<double>::quiet_NaN();
};

RunConstants run_constants(const std::string& scenario, const Simulation& sim);

std::vector<std::string> step_table_columns(int n_agents);
void write_step_table_header(std::ostream& out, const RunConstants& rc);
void write_step_row(std::ostream& out, const StepRecord& rec);
/// Trailing comment line marking an aborted run.
void write_abort_marker(std::ostream& out, const std::string& reason);

struct StepTable {
  RunConstants constants;
  std::vector<StepRecord> records;
  bool aborted = false;
};
/// Throws ConfigError on malformed input.
StepTable read_step_table(std::istream& in);

/// Least-squares slope of log(mu) against t.
struct DecayFit {
  double slope = 0.0;
  int samples = 0;
};

struct AgentSummary {
  DecayFit fit;
  double fit_window_floor = 0.0;  // mu threshold that closes the fit window
  double slope_rel_error = 0.0;   // |slope + k_w| / k_w
  double final_mu = 0.0;
  double final_delta = 0.0;
  double band_entry_time = -1.0;     // first t with delta <= delta*, -1 if never
  double max_delta_after_entry = 0.0;
  bool mu_monotone_outside_band = true;  // mu non-increasing while above mu* + tol
};

struct SummaryReport {
  RunConstants constants;
  std::vector<AgentSummary> agents;
  int steps = 0;
  double t_final = 0.0;
  double min_lambda = 0.0;
  double final_lambda = 0.0;
  double max_pair_displacement = 0.0;
  double pair_displacement_bound = 0.0;
  double min_weyl_margin = 0.0;  // min_t lambda(t) - (lambda0 - (2 D0 eps + eps^2))
  double min_trace_error = 3.0;
  int unknown_rate_violations = 0;
  int heading_holds = 0;
  // Source approach, field runs only.
  double alignment_time = -1.0;  // first t where every mu_i < mu*
  double approach_end_time = -1.0;  // first later t with |p_c - p_sigma| <= 2 D
  double max_approach_increase = 0.0;
  int approach_increases = 0;
  double initial_dist_source = 0.0;
  double final_dist_source = 0.0;
  bool aborted = false;

  struct Flags {
    bool decay_slope = false;
    bool delta_band = false;
    bool nondegenerate = false;
    bool pair_displacement = false;
    bool weyl_chain = false;
    bool trace_guard = false;
    bool source_approach = false;
  } flags;
};

/// Streaming summary; feed records in time order.
class SummaryAccumulator {
 public:
  explicit SummaryAccumulator(RunConstants rc);
  void add(const StepRecord& rec);
  void mark_aborted() { aborted_ = true; }
  SummaryReport finish() const;

 private:
  struct Fit {
    double st = 0, sy = 0, stt = 0, sty = 0;
    int n = 0;
    bool open = true;
  };
  RunConstants rc_;
  std::vector<Fit> fits_;
  std::vector<AgentSummary> agents_;
  std::vector<double> prev_mu_;
  SummaryReport acc_;
  double prev_dist_ = 0.0;
  bool approach_open_ = false;
  bool aborted_ = false;
  bool first_ = true;
};

SummaryReport summarize(const RunConstants& rc, const std::vector<StepRecord>& records);

nlohmann::json to_json(const SummaryReport& report);

}  // namespace so3seek
