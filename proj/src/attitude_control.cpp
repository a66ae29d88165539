#include "so3seek/attitude_control.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

namespace so3seek {

namespace {
constexpr double kHeadingUnitTol = 1e-6;
}

void ControllerConfig::validate() const {
  if (!(k_w > 0.0) || !std::isfinite(k_w)) {
    throw ConfigError(fmt::format("controller gain k_w must be positive, got {}", k_w));
  }
  if (!(mu_star > 0.0) || !(mu_star <= delta_star) || !(delta_star <= std::numbers::pi)) {
    throw ConfigError(fmt::format("need 0 < mu_star <= delta_star <= pi, got mu_star = {}, delta_star = {}",
                                  mu_star, delta_star));
  }
}

AttitudeError attitude_error(const Rotation& r_d, const Rotation& r) {
  AttitudeError err;
  err.r_e = r_d.transpose() * r;
  err.tau_e = log(err.r_e);
  err.mu = err.tau_e.norm();
  return err;
}

SkewMatrix error_rate(const SkewMatrix& omega, const SkewMatrix& omega_d, const Rotation& r_e) {
  return omega - adjoint_rotate(r_e.transpose(), omega_d);
}

SkewMatrix control_full_ff(const Rotation& r_e, const SkewMatrix& omega_d, double k_w) {
  if (!(k_w > 0.0)) throw InvalidArgument("control gain must be positive");
  return -k_w * log_matrix(r_e) + adjoint_rotate(r_e.transpose(), omega_d);
}

SkewMatrix control_known_ff(const Rotation& r_e, const DesiredAttitudeRate& rate, double k_w) {
  return control_full_ff(r_e, rate.known, k_w);
}

double gain_for_bounded_rate(double omega_max, double mu_star) {
  if (!(mu_star > 0.0)) {
    throw InvalidArgument(fmt::format("mu_star must be positive, got {}", mu_star));
  }
  if (!(omega_max >= 0.0)) {
    throw InvalidArgument(fmt::format("omega_max must be non-negative, got {}", omega_max));
  }
  return std::numbers::sqrt2 * omega_max / mu_star;
}

double lyapunov_value(const AttitudeError& err, LyapunovVariant variant) {
  switch (variant) {
    case LyapunovVariant::kFullFeedForward: {
      // 1/2 ||log R_e||_F^2 == mu^2
      const double f = hat(err.tau_e).frobenius_norm();
      return 0.5 * f * f;
    }
    case LyapunovVariant::kKnownFeedForward:
      return 0.25 * err.mu * err.mu;
  }
  return 0.0;
}

double heading_alignment_delta(const UnitVector3& x_b, const UnitVector3& m_d) {
  // arccos(x_b . m_d), evaluated via atan2 to stay accurate near 0 and pi.
  return std::atan2(x_b.vec().cross(m_d.vec()).norm(), x_b.dot(m_d));
}

double heading_alignment_delta(const Vector3& x_b, const Vector3& m_d) {
  return heading_alignment_delta(UnitVector3::from(x_b, kHeadingUnitTol),
                                 UnitVector3::from(m_d, kHeadingUnitTol));
}

}  // namespace so3seek
