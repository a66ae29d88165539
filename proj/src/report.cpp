#include "so3seek/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/core.h>

namespace so3seek {

namespace {

constexpr double kFitFloor = 1e-6;
constexpr double kMonotoneTol = 1e-9;
constexpr double kWeylTol = 1e-9;

std::string num(double v) { return fmt::format("{:.17g}", v); }

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError(fmt::format("step table: bad number '{}'", s));
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

RunConstants run_constants(const std::string& scenario, const Simulation& sim) {
  RunConstants rc;
  const auto& cfg = sim.config();
  const auto& info = sim.info();
  rc.scenario = scenario;
  rc.n_agents = cfg.n_agents;
  rc.speed = cfg.speed;
  rc.dt = cfg.dt;
  rc.k_w = info.k_w;
  rc.mu_star = cfg.controller.mu_star;
  rc.delta_star = cfg.controller.delta_star;
  rc.omega_max = cfg.omega_max;
  rc.lambda_min0 = info.initial_stats.lambda_min;
  rc.radius0 = info.initial_stats.radius;
  rc.has_field = cfg.field.has_value();
  rc.rate_frame = std::string(to_string(cfg.desired.frame));
  if (info.plan) {
    rc.k1 = info.plan->k1;
    rc.k2 = info.plan->k2;
    rc.epsilon_max = info.plan->epsilon_max;
  }
  return rc;
}

std::vector<std::string> step_table_columns(int n_agents) {
  std::vector<std::string> cols{"t"};
  for (int i = 0; i < n_agents; ++i) {
    for (const char* a : {"x", "y", "z"}) cols.push_back(fmt::format("p{}_{}", i, a));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cols.push_back(fmt::format("R{}_{}{}", i, r, c));
    cols.push_back(fmt::format("mu{}", i));
    cols.push_back(fmt::format("delta{}", i));
  }
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) cols.push_back(fmt::format("Rd_{}{}", r, c));
  for (const char* name : {"pc_x", "pc_y", "pc_z", "lambda_min", "D", "epsilon", "max_pair_disp",
                           "sigma_pc", "dist_source", "min_trace_Re", "known_rate_norm",
                           "unknown_rate_norm", "unknown_rate_flag", "heading_held"}) {
    cols.emplace_back(name);
  }
  return cols;
}

void write_step_table_header(std::ostream& out, const RunConstants& rc) {
  out << "# so3seek step table\n";
  out << "# columns: t, then per agent i: p_i (3), R_i row-major (9), mu_i, delta_i;\n";
  out << "#   then R_d row-major (9), centroid (3), lambda_min(P), D, epsilon = max_i |x_i - x_i(0)|,\n";
  out << "#   max_ij |p_ij - p_ij(0)|, sigma(p_c), |p_c - p_sigma|, min_i tr(R_e,i),\n";
  out << "#   |known rate|, |unknown rate|, unknown-rate bound flag, heading-held flag\n";
  out << "# scenario = " << rc.scenario << "\n";
  out << "# n_agents = " << rc.n_agents << "\n";
  out << "# speed = " << num(rc.speed) << "\n";
  out << "# dt = " << num(rc.dt) << "\n";
  out << "# k_w = " << num(rc.k_w) << "\n";
  out << "# mu_star = " << num(rc.mu_star) << "\n";
  out << "# delta_star = " << num(rc.delta_star) << "\n";
  out << "# omega_max = " << num(rc.omega_max) << "\n";
  out << "# lambda_min0 = " << num(rc.lambda_min0) << "\n";
  out << "# D0 = " << num(rc.radius0) << "\n";
  out << "# has_field = " << (rc.has_field ? 1 : 0) << "\n";
  out << "# rate_frame = " << rc.rate_frame << "\n";
  out << "# k1 = " << num(rc.k1) << "\n";
  out << "# k2 = " << num(rc.k2) << "\n";
  out << "# epsilon_max = " << num(rc.epsilon_max) << "\n";
  const auto cols = step_table_columns(rc.n_agents);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
}

void write_step_row(std::ostream& out, const StepRecord& rec) {
  std::string line = num(rec.t);
  auto put = [&line](double v) {
    line += ',';
    line += num(v);
  };
  for (std::size_t i = 0; i < rec.p.size(); ++i) {
    for (int a = 0; a < 3; ++a) put(rec.p[i][a]);
    for (double v : rec.r[i].row_major()) put(v);
    put(rec.mu[i]);
    put(rec.delta[i]);
  }
  for (double v : rec.r_d.row_major()) put(v);
  for (int a = 0; a < 3; ++a) put(rec.centroid[a]);
  put(rec.lambda_min);
  put(rec.radius);
  put(rec.epsilon);
  put(rec.max_pair_displacement);
  put(rec.sigma_centroid);
  put(rec.dist_source);
  put(rec.min_trace_error);
  put(rec.known_rate_norm);
  put(rec.unknown_rate_norm);
  put(rec.unknown_rate_exceeds_bound ? 1.0 : 0.0);
  put(rec.heading_held ? 1.0 : 0.0);
  line += '\n';
  out << line;
}

void write_abort_marker(std::ostream& out, const std::string& reason) {
  std::string flat = reason;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  out << "# ABORTED: " << flat << "\n";
}

StepTable read_step_table(std::istream& in) {
  StepTable table;
  RunConstants& rc = table.constants;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# ABORTED", 0) == 0) {
        table.aborted = true;
        continue;
      }
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 3);
      if (key == "scenario") rc.scenario = value;
      else if (key == "n_agents") rc.n_agents = static_cast<int>(to_double(value));
      else if (key == "speed") rc.speed = to_double(value);
      else if (key == "dt") rc.dt = to_double(value);
      else if (key == "k_w") rc.k_w = to_double(value);
      else if (key == "mu_star") rc.mu_star = to_double(value);
      else if (key == "delta_star") rc.delta_star = to_double(value);
      else if (key == "omega_max") rc.omega_max = to_double(value);
      else if (key == "lambda_min0") rc.lambda_min0 = to_double(value);
      else if (key == "D0") rc.radius0 = to_double(value);
      else if (key == "has_field") rc.has_field = to_double(value) != 0.0;
      else if (key == "rate_frame") rc.rate_frame = value;
      else if (key == "k1") rc.k1 = to_double(value);
      else if (key == "k2") rc.k2 = to_double(value);
      else if (key == "epsilon_max") rc.epsilon_max = to_double(value);
      continue;
    }
    if (header.empty()) {
      header = split(line, ',');
      if (header != step_table_columns(rc.n_agents)) {
        throw ConfigError("step table: header row does not match the documented column order");
      }
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw ConfigError(fmt::format("step table: row has {} cells, expected {}", cells.size(), header.size()));
    }
    std::size_t c = 0;
    auto next = [&]() { return to_double(cells[c++]); };
    StepRecord rec;
    rec.t = next();
    const auto n = static_cast<std::size_t>(rc.n_agents);
    for (std::size_t i = 0; i < n; ++i) {
      Vector3 p;
      for (int a = 0; a < 3; ++a) p[a] = next();
      std::array<double, 9> m{};
      for (auto& v : m) v = next();
      rec.p.push_back(p);
      rec.r.push_back(Rotation::from_row_major(m));
      rec.mu.push_back(next());
      rec.delta.push_back(next());
    }
    std::array<double, 9> md{};
    for (auto& v : md) v = next();
    rec.r_d = Rotation::from_row_major(md);
    for (int a = 0; a < 3; ++a) rec.centroid[a] = next();
    rec.lambda_min = next();
    rec.radius = next();
    rec.epsilon = next();
    rec.max_pair_displacement = next();
    rec.sigma_centroid = next();
    rec.dist_source = next();
    rec.min_trace_error = next();
    rec.known_rate_norm = next();
    rec.unknown_rate_norm = next();
    rec.unknown_rate_exceeds_bound = next() != 0.0;
    rec.heading_held = next() != 0.0;
    table.records.push_back(std::move(rec));
  }
  if (header.empty()) throw ConfigError("step table: missing header row");
  return table;
}

SummaryAccumulator::SummaryAccumulator(RunConstants rc) : rc_(std::move(rc)) {
  const auto n = static_cast<std::size_t>(rc_.n_agents);
  fits_.resize(n);
  agents_.resize(n);
  prev_mu_.assign(n, 0.0);
  acc_.constants = rc_;
  acc_.min_lambda = std::numeric_limits<double>::infinity();
  acc_.min_weyl_margin = std::numeric_limits<double>::infinity();
  acc_.pair_displacement_bound = 2.0 * std::numbers::pi * rc_.speed / rc_.k_w;
  const double floor = rc_.omega_max == 0.0 ? kFitFloor : std::max(rc_.mu_star, kFitFloor);
  for (auto& a : agents_) a.fit_window_floor = floor;
}

void SummaryAccumulator::add(const StepRecord& rec) {
  const double band_tol = rc_.delta_star;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    AgentSummary& a = agents_[i];
    Fit& f = fits_[i];
    const double mu = rec.mu[i];
    if (f.open) {
      if (mu > a.fit_window_floor && mu >= kFitFloor) {
        const double y = std::log(mu);
        f.st += rec.t;
        f.sy += y;
        f.stt += rec.t * rec.t;
        f.sty += rec.t * y;
        ++f.n;
      } else {
        f.open = false;
      }
    }
    if (!first_ && prev_mu_[i] > rc_.mu_star + kMonotoneTol && mu > prev_mu_[i] + 1e-12) {
      a.mu_monotone_outside_band = false;
    }
    prev_mu_[i] = mu;
    if (a.band_entry_time < 0.0) {
      if (rec.delta[i] <= band_tol) a.band_entry_time = rec.t;
    } else {
      a.max_delta_after_entry = std::max(a.max_delta_after_entry, rec.delta[i]);
    }
    a.final_mu = mu;
    a.final_delta = rec.delta[i];
  }

  acc_.min_lambda = std::min(acc_.min_lambda, rec.lambda_min);
  acc_.final_lambda = rec.lambda_min;
  acc_.max_pair_displacement = std::max(acc_.max_pair_displacement, rec.max_pair_displacement);
  const double weyl_floor = rc_.lambda_min0 - (2.0 * rc_.radius0 * rec.epsilon + rec.epsilon * rec.epsilon);
  acc_.min_weyl_margin = std::min(acc_.min_weyl_margin, rec.lambda_min - weyl_floor);
  acc_.min_trace_error = std::min(acc_.min_trace_error, rec.min_trace_error);
  if (rec.unknown_rate_exceeds_bound) ++acc_.unknown_rate_violations;
  if (rec.heading_held) ++acc_.heading_holds;

  if (rc_.has_field) {
    if (first_) acc_.initial_dist_source = rec.dist_source;
    acc_.final_dist_source = rec.dist_source;
    if (acc_.alignment_time < 0.0 &&
        std::all_of(rec.mu.begin(), rec.mu.end(), [&](double m) { return m < rc_.mu_star; })) {
      acc_.alignment_time = rec.t;
      approach_open_ = true;
    } else if (approach_open_) {
      const double inc = rec.dist_source - prev_dist_;
      if (inc > 0.0) {
        ++acc_.approach_increases;
        acc_.max_approach_increase = std::max(acc_.max_approach_increase, inc);
      }
    }
    if (approach_open_ && rec.dist_source <= 2.0 * rec.radius) {
      acc_.approach_end_time = rec.t;
      approach_open_ = false;
    }
    prev_dist_ = rec.dist_source;
  }

  acc_.t_final = rec.t;
  ++acc_.steps;
  first_ = false;
}

SummaryReport SummaryAccumulator::finish() const {
  SummaryReport r = acc_;
  r.aborted = aborted_;
  r.agents = agents_;
  for (std::size_t i = 0; i < r.agents.size(); ++i) {
    const Fit& f = fits_[i];
    AgentSummary& a = r.agents[i];
    a.fit.samples = f.n;
    if (f.n >= 2) {
      const double denom = f.n * f.stt - f.st * f.st;
      a.fit.slope = denom != 0.0 ? (f.n * f.sty - f.st * f.sy) / denom : 0.0;
    }
    a.slope_rel_error = std::abs(a.fit.slope + rc_.k_w) / rc_.k_w;
  }

  auto& fl = r.flags;
  const bool prop1_regime = rc_.omega_max == 0.0;
  fl.decay_slope = std::all_of(r.agents.begin(), r.agents.end(), [&](const AgentSummary& a) {
    if (a.fit.samples < 2) return true;
    return prop1_regime ? a.slope_rel_error <= 0.02 : a.fit.slope <= -0.9 * rc_.k_w;
  });
  const double band_ceiling = rc_.delta_star + 5.0 * rc_.dt * rc_.k_w;
  fl.delta_band = std::all_of(r.agents.begin(), r.agents.end(), [&](const AgentSummary& a) {
    return a.band_entry_time >= 0.0 && a.max_delta_after_entry <= band_ceiling;
  });
  fl.nondegenerate = r.min_lambda > 0.0;
  fl.pair_displacement = r.max_pair_displacement <= r.pair_displacement_bound;
  fl.weyl_chain = r.min_weyl_margin >= -kWeylTol;
  fl.trace_guard = !aborted_ && r.min_trace_error > -1.0 + so3::kTraceGuard;
  fl.source_approach = rc_.has_field && r.alignment_time >= 0.0 && r.approach_end_time >= 0.0 &&
                       r.max_approach_increase <= rc_.speed * rc_.dt;
  return r;
}

SummaryReport summarize(const RunConstants& rc, const std::vector<StepRecord>& records) {
  SummaryAccumulator acc(rc);
  for (const auto& r : records) acc.add(r);
  return acc.finish();
}

nlohmann::json to_json(const SummaryReport& r) {
  using nlohmann::json;
  auto finite_or_null = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
  const auto& rc = r.constants;
  json j;
  j["scenario"] = rc.scenario;
  j["aborted"] = r.aborted;
  j["steps"] = r.steps;
  j["t_final"] = r.t_final;
  j["gains"] = {{"k1", finite_or_null(rc.k1)},
                {"k2", finite_or_null(rc.k2)},
                {"epsilon_max", finite_or_null(rc.epsilon_max)},
                {"k_w", rc.k_w}};
  json agents = json::array();
  for (const auto& a : r.agents) {
    agents.push_back({{"decay_slope", a.fit.slope},
                      {"decay_fit_samples", a.fit.samples},
                      {"decay_fit_floor", a.fit_window_floor},
                      {"slope_rel_error", a.slope_rel_error},
                      {"final_mu", a.final_mu},
                      {"final_delta", a.final_delta},
                      {"band_entry_time", a.band_entry_time >= 0.0 ? json(a.band_entry_time) : json(nullptr)},
                      {"max_delta_after_entry", a.max_delta_after_entry},
                      {"mu_monotone_outside_band", a.mu_monotone_outside_band}});
  }
  j["agents"] = agents;
  j["deployment"] = {{"lambda_min0", rc.lambda_min0},
                     {"D0", rc.radius0},
                     {"min_lambda_min", r.min_lambda},
                     {"final_lambda_min", r.final_lambda},
                     {"min_weyl_margin", r.min_weyl_margin}};
  j["pair_displacement"] = {{"max_pair_displacement", r.max_pair_displacement}, {"bound", r.pair_displacement_bound}};
  j["rate_frame"] = rc.rate_frame;
  j["min_trace_Re"] = r.min_trace_error;
  j["unknown_rate_violations"] = r.unknown_rate_violations;
  j["heading_holds"] = r.heading_holds;
  if (rc.has_field) {
    j["source"] = {{"initial_distance", r.initial_dist_source},
                   {"final_distance", r.final_dist_source},
                   {"alignment_time", r.alignment_time >= 0.0 ? json(r.alignment_time) : json(nullptr)},
                   {"approach_end_time", r.approach_end_time >= 0.0 ? json(r.approach_end_time) : json(nullptr)},
                   {"approach_increases", r.approach_increases},
                   {"max_approach_increase", r.max_approach_increase}};
  }
  const auto& f = r.flags;
  j["flags"] = {{"decay_slope", f.decay_slope},
                {"delta_band", f.delta_band},
                {"nondegenerate", f.nondegenerate},
                {"pair_displacement", f.pair_displacement},
                {"weyl_chain", f.weyl_chain},
                {"trace_guard", f.trace_guard},
                {"source_approach", rc.has_field ? json(f.source_approach) : json(nullptr)}};
  return j;
}

}  // namespace so3seek
