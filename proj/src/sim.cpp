#include "so3seek/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/core.h>

namespace so3seek {

namespace {

constexpr double kAntipodalTol = 1e-6;

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<std::pair<std::string_view, E>> table,
             const char* what) {
  for (const auto& [name, value] : table)
    if (name == s) return value;
  throw ConfigError(fmt::format("unknown {} '{}'", what, s));
}

Vector3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const Vector3 v(n(rng), n(rng), n(rng));
    const double len = v.norm();
    if (len > 1e-12) return v / len;
  }
}

Vector3 random_in_ball(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vector3 dir = random_unit(rng);
  return radius * std::cbrt(u(rng)) * dir;
}

// Haar measure restricted to the geodesic ball of radius `spread` about the
// identity: uniform axis, angle density proportional to 1 - cos(theta).
RotationVector random_in_geodesic_ball(std::mt19937_64& rng, double spread) {
  if (spread <= 0.0) return Vector3::Zero();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double peak = 1.0 - std::cos(spread);
  double theta;
  do {
    theta = spread * u(rng);
  } while (u(rng) * peak > 1.0 - std::cos(theta));
  return theta * random_unit(rng);
}

Rotation initial_frame(const UnitVector3& heading, const Rotation& reference) {
  try {
    return complete_frame(heading, reference);
  } catch (const AntipodalHeading&) {
    // Half turn about the reference z-axis flips its heading onto -x.
    return complete_frame(heading, reference * exp(Vector3(0.0, 0.0, std::numbers::pi)));
  }
}

}  // namespace

std::string_view to_string(DesiredMode m) {
  switch (m) {
    case DesiredMode::kConstant: return "constant";
    case DesiredMode::kPrescribedRates: return "prescribed-rates";
    case DesiredMode::kSourceSeeking: return "source-seeking";
  }
  return "?";
}
std::string_view to_string(RateFrame f) { return f == RateFrame::kLiteral ? "literal" : "body"; }
std::string_view to_string(GainMode g) {
  switch (g) {
    case GainMode::kManual: return "manual";
    case GainMode::kPlanned: return "planned";
    case GainMode::kBoundedRate: return "bounded-rate";
    case GainMode::kNondegeneracy: return "nondegeneracy";
  }
  return "?";
}
std::string_view to_string(ControlLawKind c) {
  return c == ControlLawKind::kKnownFeedForward ? "known-ff" : "full-ff";
}
std::string_view to_string(PlacementKind k) {
  return k == PlacementKind::kExplicit ? "explicit" : "random-ball";
}

DesiredMode desired_mode_from_string(std::string_view s) {
  return parse_enum<DesiredMode>(s,
                                 {{"constant", DesiredMode::kConstant},
                                  {"prescribed-rates", DesiredMode::kPrescribedRates},
                                  {"source-seeking", DesiredMode::kSourceSeeking}},
                                 "desired-attitude mode");
}
RateFrame rate_frame_from_string(std::string_view s) {
  return parse_enum<RateFrame>(s, {{"literal", RateFrame::kLiteral}, {"body", RateFrame::kBody}},
                               "rate frame");
}
GainMode gain_mode_from_string(std::string_view s) {
  return parse_enum<GainMode>(s,
                              {{"manual", GainMode::kManual},
                               {"planned", GainMode::kPlanned},
                               {"bounded-rate", GainMode::kBoundedRate},
                               {"nondegeneracy", GainMode::kNondegeneracy}},
                              "gain mode");
}
ControlLawKind control_law_from_string(std::string_view s) {
  return parse_enum<ControlLawKind>(
      s, {{"known-ff", ControlLawKind::kKnownFeedForward}, {"full-ff", ControlLawKind::kFullFeedForward}},
      "control law");
}
PlacementKind placement_kind_from_string(std::string_view s) {
  return parse_enum<PlacementKind>(
      s, {{"explicit", PlacementKind::kExplicit}, {"random-ball", PlacementKind::kRandomBall}},
      "placement kind");
}

RobotState step_agent(const RobotState& state, const SkewMatrix& omega, double s, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("step_agent: dt must be positive");
  const Vector3 w = vee(omega);
  const Vector3 heading_mid = (state.r * exp(0.5 * dt * w)).column(0);
  return {state.p + dt * s * heading_mid, state.r * exp(dt * w)};
}

Vector3 DesiredAttitudeTrajectory::known_body_rate() const {
  return frame == RateFrame::kLiteral ? Vector3(r_d.transpose() * omega_known) : omega_known;
}

Vector3 DesiredAttitudeTrajectory::unknown_body_rate() const { return omega_unknown; }

Rotation complete_frame(const UnitVector3& x_d, const Rotation& prev) {
  const Vector3 a = prev.column(0);
  const Vector3& b = x_d.vec();
  if ((a + b).norm() <= kAntipodalTol) {
    throw AntipodalHeading("complete_frame: target heading is antipodal to the previous heading");
  }
  const Vector3 axis = a.cross(b);
  const double sin_angle = axis.norm();
  if (sin_angle == 0.0) return prev;
  const double angle = std::atan2(sin_angle, a.dot(b));
  return exp(angle / sin_angle * axis) * prev;
}

DesiredAttitudeTrajectory advance_desired(const DesiredAttitudeTrajectory& traj, double dt,
                                          const std::optional<UnitVector3>& heading) {
  if (!(dt > 0.0)) throw InvalidArgument("advance_desired: dt must be positive");
  DesiredAttitudeTrajectory next = traj;
  switch (traj.mode) {
    case DesiredMode::kConstant:
      break;
    case DesiredMode::kPrescribedRates:
      next.r_d = traj.r_d * exp(dt * (traj.known_body_rate() + traj.unknown_body_rate()));
      break;
    case DesiredMode::kSourceSeeking: {
      if (!heading) throw InvalidArgument("advance_desired: source-seeking mode needs a heading");
      const Rotation predicted = traj.r_d * exp(dt * traj.known_body_rate());
      next.r_d = complete_frame(*heading, predicted);
      next.omega_unknown = log(predicted.transpose() * next.r_d) / dt;
      break;
    }
  }
  return next;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (n_agents < 1) fail("n_agents must be >= 1");
  if (!(speed > 0.0) || !std::isfinite(speed)) fail("speed must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end)) fail("t_end must be >= dt");
  if (!(omega_max >= 0.0)) fail("omega_max must be >= 0");
  if (!(sample_noise >= 0.0)) fail("sample_noise must be >= 0");
  if (reproject_every < 0) fail("reproject_every must be >= 0");
  if (!(controller.mu_star > 0.0) || !(controller.mu_star <= controller.delta_star) ||
      !(controller.delta_star <= std::numbers::pi)) {
    fail("need 0 < mu_star <= delta_star <= pi");
  }
  if (gain_mode == GainMode::kManual && !(controller.k_w > 0.0)) fail("manual gain k_w must be positive");
  if (placement.kind == PlacementKind::kExplicit &&
      placement.positions.size() != static_cast<std::size_t>(n_agents)) {
    fail(fmt::format("explicit placement lists {} positions for {} agents", placement.positions.size(),
                     n_agents));
  }
  if (placement.kind == PlacementKind::kRandomBall && !(placement.radius >= 0.0)) {
    fail("placement radius must be >= 0");
  }
  if (!(placement.attitude_spread >= 0.0) || !(placement.attitude_spread < std::numbers::pi)) {
    fail("attitude_spread must lie in [0, pi)");
  }
  if (desired.mode == DesiredMode::kSourceSeeking) {
    if (!field) fail("source-seeking mode needs a field");
    if (n_agents < 2) fail("source-seeking mode needs at least two agents");
    if (law == ControlLawKind::kFullFeedForward) {
      fail("full-ff law needs the whole desired rate, which source-seeking mode cannot supply");
    }
  }
  if (!desired.omega_known.allFinite() || !desired.omega_unknown.allFinite()) {
    fail("desired rates must be finite");
  }
}

int SimConfig::num_steps() const { return static_cast<int>(std::llround(t_end / dt)); }

Simulation::Simulation(SimConfig config, ControlLaw law_override)
    : config_(std::move(config)), law_override_(std::move(law_override)) {
  config_.validate();
  if (config_.field) field_ = ScalarField::create(*config_.field);

  std::mt19937_64 rng(config_.seed);
  std::vector<Vector3> positions;
  if (config_.placement.kind == PlacementKind::kExplicit) {
    positions = config_.placement.positions;
  } else {
    for (int i = 0; i < config_.n_agents; ++i) {
      positions.push_back(config_.placement.center + random_in_ball(rng, config_.placement.radius));
    }
  }
  info_.initial_stats = deployment_stats(positions);

  Rotation r_d0 = config_.desired.initial;
  if (config_.desired.mode == DesiredMode::kSourceSeeking) {
    std::vector<double> samples;
    for (const auto& p : positions) samples.push_back(field_->value(p));
    const Vector3 l = ascending_direction(samples, info_.initial_stats);
    r_d0 = initial_frame(heading_field(l, heading_norm_threshold(samples)), r_d0);
  }
  info_.initial_desired = r_d0;

  for (const auto& p : positions) {
    info_.initial_states.push_back(
        {p, r_d0 * exp(random_in_geodesic_ball(rng, config_.placement.attitude_spread))});
  }

  if (info_.initial_stats.nondegenerate()) {
    info_.plan = plan_gains(config_.omega_max, config_.controller.mu_star, config_.speed,
                            info_.initial_stats);
  }
  switch (config_.gain_mode) {
    case GainMode::kManual:
      info_.k_w = config_.controller.k_w;
      break;
    case GainMode::kBoundedRate:
      info_.k_w = gain_for_bounded_rate(config_.omega_max, config_.controller.mu_star);
      break;
    case GainMode::kPlanned:
    case GainMode::kNondegeneracy: {
      const GainPlan plan =
          plan_gains(config_.omega_max, config_.controller.mu_star, config_.speed, info_.initial_stats);
      info_.k_w = config_.gain_mode == GainMode::kPlanned ? plan.k_w : plan.k2;
      break;
    }
  }
  config_.controller.k_w = info_.k_w;
  config_.controller.validate();
  info_.num_steps = config_.num_steps();
}

void Simulation::run(const std::function<void(const StepRecord&)>& sink) {
  const auto& cfg = config_;
  const std::size_t n = static_cast<std::size_t>(cfg.n_agents);
  const double k_w = info_.k_w;

  std::vector<RobotState> agents = info_.initial_states;
  const std::vector<Vector3>& x0 = info_.initial_stats.x;
  std::vector<Vector3> p0;
  for (const auto& a : agents) p0.push_back(a.p);

  DesiredAttitudeTrajectory traj;
  traj.mode = cfg.desired.mode;
  traj.frame = cfg.desired.frame;
  traj.r_d = info_.initial_desired;
  traj.omega_known = cfg.desired.omega_known;
  traj.omega_unknown = cfg.desired.mode == DesiredMode::kPrescribedRates ? cfg.desired.omega_unknown
                                                                          : Vector3::Zero();
  traj.omega_max_declared = cfg.omega_max;

  std::mt19937_64 noise_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> noise(0.0, cfg.sample_noise > 0.0 ? cfg.sample_noise : 1.0);

  std::vector<Vector3> positions(n);
  std::vector<SkewMatrix> controls(n);

  for (int k = 0; k <= info_.num_steps; ++k) {
    StepRecord rec;
    rec.t = k * cfg.dt;

    // 1. snapshot
    for (std::size_t i = 0; i < n; ++i) positions[i] = agents[i].p;

    // 2. stats, heading, R_d
    const DeploymentStats stats = deployment_stats(positions);
    if (k > 0) {
      std::optional<UnitVector3> heading;
      if (traj.mode == DesiredMode::kSourceSeeking) {
        std::vector<double> samples(n);
        for (std::size_t i = 0; i < n; ++i) {
          samples[i] = field_->value(positions[i]);
          if (cfg.sample_noise > 0.0) samples[i] += noise(noise_rng);
        }
        try {
          heading = heading_field(ascending_direction(samples, stats), heading_norm_threshold(samples));
        } catch (const DegenerateDirection&) {
          heading = traj.r_d.x_axis();
          rec.heading_held = true;
        }
      }
      traj = advance_desired(traj, cfg.dt, heading);
    }
    if (cfg.reproject_every > 0 && k > 0 && k % cfg.reproject_every == 0) {
      traj.r_d = project_to_so3(traj.r_d.matrix());
      for (auto& a : agents) a.r = project_to_so3(a.r.matrix());
    }

    const Vector3 known = traj.known_body_rate();
    const Vector3 unknown = traj.unknown_body_rate();
    const SkewMatrix omega_d_known = hat(known);
    const SkewMatrix omega_d_full = hat(known + unknown);

    rec.r_d = traj.r_d;
    rec.centroid = stats.centroid;
    rec.lambda_min = stats.lambda_min;
    rec.radius = stats.radius;
    rec.known_rate_norm = known.norm();
    rec.unknown_rate_norm = unknown.norm();
    rec.unknown_rate_exceeds_bound = unknown.norm() > cfg.omega_max * (1.0 + 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      rec.epsilon = std::max(rec.epsilon, (stats.x[i] - x0[i]).norm());
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Vector3 dij = (positions[i] - positions[j]) - (p0[i] - p0[j]);
        rec.max_pair_displacement = std::max(rec.max_pair_displacement, dij.norm());
      }
    if (field_) {
      rec.sigma_centroid = field_->value(stats.centroid);
      rec.dist_source = (stats.centroid - field_->source()).norm();
    } else {
      rec.sigma_centroid = std::numeric_limits<double>::quiet_NaN();
      rec.dist_source = std::numeric_limits<double>::quiet_NaN();
    }

    // 3. controls from the snapshot
    const UnitVector3 m_d = traj.r_d.x_axis();
    rec.p = positions;
    rec.r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Rotation r_e = traj.r_d.transpose() * agents[i].r;
      rec.min_trace_error = std::min(rec.min_trace_error, r_e.trace());
      AttitudeError err;
      try {
        err = attitude_error(traj.r_d, agents[i].r);
      } catch (const NearPiSingularity& e) {
        throw NearPiSingularity(fmt::format("agent {} at t = {}: {}", i, rec.t, e.what()));
      }
      rec.r.push_back(agents[i].r);
      rec.mu.push_back(err.mu);
      rec.delta.push_back(heading_alignment_delta(agents[i].r.x_axis(), m_d));

      if (law_override_) {
        controls[i] = law_override_(err.r_e, omega_d_known, k_w);
      } else if (cfg.law == ControlLawKind::kFullFeedForward) {
        controls[i] = control_full_ff(err.r_e, omega_d_full, k_w);
      } else {
        controls[i] = control_known_ff(err.r_e, DesiredAttitudeRate{omega_d_known, cfg.omega_max}, k_w);
      }
    }
    sink(rec);
    if (k == info_.num_steps) break;

    // 4. agent steps
    for (std::size_t i = 0; i < n; ++i) agents[i] = step_agent(agents[i], controls[i], cfg.speed, cfg.dt);
  }
}

std::vector<StepRecord> run(const SimConfig& config) {
  Simulation sim(config);
  std::vector<StepRecord> out;
  out.reserve(static_cast<std::size_t>(sim.info().num_steps) + 1);
  sim.run([&out](const StepRecord& r) { out.push_back(r); });
  return out;
}

}  // namespace so3seek
