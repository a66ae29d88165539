#pragma once

// Fixed-step closed-loop simulator for a swarm of constant-speed 3D unicycles
// tracking a shared desired attitude.
//
// Integrator: Lie-group Euler. Attitudes advance by the exact exponential of
// the (piecewise-constant) commanded body rate; positions use midpoint
// quadrature with the heading taken at the half step.
//
// Step order at time t_k:
//   1. snapshot the swarm
//   2. deployment stats, heading m_d and the R_d update
//   3. every agent's control from that snapshot
//   4. all agent steps

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "so3seek/attitude_control.hpp"
#include "so3seek/deployment.hpp"
#include "so3seek/field.hpp"
#include "so3seek/so3.hpp"

namespace so3seek {

struct RobotState {
  Vector3 p = Vector3::Zero();
  Rotation r;
};

/// One Lie-Euler step of p' = s R e1, R' = R Omega over dt.
RobotState step_agent(const RobotState& state, const SkewMatrix& omega, double s, double dt);

enum class DesiredMode { kConstant, kPrescribedRates, kSourceSeeking };

/// How the known rate vector w^k enters the body-frame desired rate.
///   literal: Omega_d^vee = R_d^T w^k + w^u   (w^k given in the earth frame)
///   body:    Omega_d^vee = w^k + w^u         (w^k given in the desired body frame)
enum class RateFrame { kLiteral, kBody };

enum class GainMode { kManual, kPlanned, kBoundedRate, kNondegeneracy };

enum class ControlLawKind { kKnownFeedForward, kFullFeedForward };

std::string_view to_string(DesiredMode m);
std::string_view to_string(RateFrame f);
std::string_view to_string(GainMode g);
std::string_view to_string(ControlLawKind c);
DesiredMode desired_mode_from_string(std::string_view s);
RateFrame rate_frame_from_string(std::string_view s);
GainMode gain_mode_from_string(std::string_view s);
ControlLawKind control_law_from_string(std::string_view s);

/// Runtime state of the shared desired attitude.
struct DesiredAttitudeTrajectory {
  DesiredMode mode = DesiredMode::kConstant;
  RateFrame frame = RateFrame::kLiteral;
  Rotation r_d;
  Vector3 omega_known = Vector3::Zero();
  // Hidden from the controllers. In source-seeking mode this is the realized
  // rate induced by the motion of m_d over the last step.
  Vector3 omega_unknown = Vector3::Zero();
  double omega_max_declared = 0.0;

  /// Body-frame known rate, vee(Omega_d^k).
  Vector3 known_body_rate() const;
  /// Body-frame unknown rate, vee(Omega_d^u).
  Vector3 unknown_body_rate() const;
};

/// Advances R_d over dt. Constant: unchanged. Prescribed rates: R_d exp(dt
/// Omega_d). Source seeking: R_d exp(dt Omega_d^k) is rotated minimally so its
/// x-axis lands on `heading`, and the realized correction is stored as the
/// unknown rate. `heading` is required in source-seeking mode.
DesiredAttitudeTrajectory advance_desired(const DesiredAttitudeTrajectory& traj, double dt,
                                          const std::optional<UnitVector3>& heading = std::nullopt);

/// Rotation whose first column is x_d, obtained from `prev` by the minimal
/// rotation carrying prev's x-axis onto x_d. Throws AntipodalHeading when
/// x_d is within 1e-6 of -prev e1.
Rotation complete_frame(const UnitVector3& x_d, const Rotation& prev);

struct DesiredAttitudeSpec {
  DesiredMode mode = DesiredMode::kConstant;
  RateFrame frame = RateFrame::kLiteral;
  Rotation initial;  // R_d(0); in source-seeking mode only the roll reference
  Vector3 omega_known = Vector3::Zero();
  Vector3 omega_unknown = Vector3::Zero();  // prescribed-rates mode only
};

enum class PlacementKind { kExplicit, kRandomBall };
std::string_view to_string(PlacementKind k);
PlacementKind placement_kind_from_string(std::string_view s);

struct PlacementSpec {
  PlacementKind kind = PlacementKind::kRandomBall;
  std::vector<Vector3> positions;  // explicit
  Vector3 center = Vector3::Zero();  // random-ball
  double radius = 1.0;               // random-ball
  // Initial attitudes are drawn Haar-uniformly from the geodesic ball of this
  // radius about R_d(0). Must stay below pi.
  double attitude_spread = 1.0;
};

struct SimConfig {
  int n_agents = 1;
  double speed = 1.0;
  double dt = 0.01;
  double t_end = 1.0;
  std::uint64_t seed = 1;
  ControllerConfig controller;
  ControlLawKind law = ControlLawKind::kKnownFeedForward;
  GainMode gain_mode = GainMode::kManual;
  double omega_max = 0.0;  // declared bound on the unknown desired rate
  std::optional<FieldSpec> field;
  DesiredAttitudeSpec desired;
  PlacementSpec placement;
  int reproject_every = 1000;  // 0 disables re-orthonormalization
  double sample_noise = 0.0;   // std dev of additive noise on field samples

  /// Throws ConfigError on any violated invariant.
  void validate() const;
  int num_steps() const;
};

struct StepRecord {
  double t = 0.0;
  std::vector<Vector3> p;
  std::vector<Rotation> r;
  std::vector<double> mu;
  std::vector<double> delta;
  Rotation r_d;
  Vector3 centroid = Vector3::Zero();
  double lambda_min = 0.0;
  double radius = 0.0;
  double epsilon = 0.0;  // max_i ||x_i(t) - x_i(0)||
  double max_pair_displacement = 0.0;  // max_ij ||p_ij(t) - p_ij(0)||
  double sigma_centroid = 0.0;  // NaN without a field
  double dist_source = 0.0;     // NaN without a field
  double min_trace_error = 3.0;  // min_i tr(R_e,i)
  double known_rate_norm = 0.0;
  double unknown_rate_norm = 0.0;
  bool unknown_rate_exceeds_bound = false;
  bool heading_held = false;
};

struct RunInfo {
  double k_w = 0.0;
  std::optional<GainPlan> plan;
  DeploymentStats initial_stats;
  std::vector<RobotState> initial_states;
  Rotation initial_desired;
  int num_steps = 0;
};

/// Control law override, used by fault-injection checks.
using ControlLaw = std::function<SkewMatrix(const Rotation& r_e, const SkewMatrix& omega_d, double k_w)>;

class Simulation {
 public:
  /// Validates the config, places the swarm, and resolves the gain.
  /// Throws ConfigError, or DegenerateDeployment when a planned gain needs a
  /// full-rank initial covariance that is not there.
  explicit Simulation(SimConfig config, ControlLaw law_override = {});

  const RunInfo& info() const { return info_; }
  const SimConfig& config() const { return config_; }

  /// Runs to t_end, handing every record to `sink` as it is produced.
  /// Throws NearPiSingularity (after emitting all completed records) when an
  /// agent's attitude error reaches the principal-log boundary.
  void run(const std::function<void(const StepRecord&)>& sink);

 private:
  SimConfig config_;
  ControlLaw law_override_;
  std::optional<ScalarField> field_;
  RunInfo info_;
};

/// Convenience wrapper collecting every record.
std::vector<StepRecord> run(const SimConfig& config);

}  // namespace so3seek
