#pragma once

// Attitude error signals and the proportional + feed-forward tracking laws.
//
// The error matrix is R_e = R_d^T R. With body-frame desired rate Omega_d
// (R_d' = R_d Omega_d), the error evolves as R_e' = R_e Omega_e with
// Omega_e = Omega - Ad_{R_e^T}(Omega_d).

#include "so3seek/so3.hpp"

namespace so3seek {

struct AttitudeError {
  Rotation r_e;
  double mu = 0.0;   // geodesic distance d(R_d, R), radians
  Vector3 tau_e = Vector3::Zero();  // log(R_e)^vee
};

/// Desired-attitude rate split into a designed (known) part and a bound on
/// the part controllers cannot observe.
struct DesiredAttitudeRate {
  SkewMatrix known;
  double unknown_bound = 0.0;  // rad / time unit
};

struct ControllerConfig {
  double k_w = 1.0;
  double mu_star = 0.4;
  double delta_star = 0.4;

  /// Throws ConfigError unless k_w > 0 and 0 < mu_star <= delta_star <= pi.
  void validate() const;
};

enum class LyapunovVariant { kFullFeedForward, kKnownFeedForward };

AttitudeError attitude_error(const Rotation& r_d, const Rotation& r);

/// Omega_e = Omega - Ad_{R_e^T}(Omega_d).
SkewMatrix error_rate(const SkewMatrix& omega, const SkewMatrix& omega_d, const Rotation& r_e);

/// -k_w log(R_e) + Ad_{R_e^T}(Omega_d). Closes the loop as Omega_e = -k_w log(R_e).
SkewMatrix control_full_ff(const Rotation& r_e, const SkewMatrix& omega_d, double k_w);

/// Same law fed only the known component of the desired rate.
SkewMatrix control_known_ff(const Rotation& r_e, const DesiredAttitudeRate& rate, double k_w);

/// sqrt(2) * omega_max / mu_star: the gain that drives mu into [0, mu_star]
/// against an unknown desired rate bounded by omega_max.
double gain_for_bounded_rate(double omega_max, double mu_star);

/// mu^2 for the full feed-forward analysis, mu^2 / 4 for the bounded-rate one.
double lyapunov_value(const AttitudeError& err, LyapunovVariant variant);

/// Angle between two headings on the unit sphere, in [0, pi].
/// Inputs must be unit within 1e-6.
double heading_alignment_delta(const Vector3& x_b, const Vector3& m_d);
double heading_alignment_delta(const UnitVector3& x_b, const UnitVector3& m_d);

}  // namespace so3seek
