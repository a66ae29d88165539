#include "so3seek/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "so3seek/attitude_control.hpp"
#include "so3seek/sym_eigen.hpp"

namespace so3seek {

namespace {
constexpr double kDegenerateRelTol = 1e-12;
}

bool DeploymentStats::nondegenerate() const {
  const double scale = std::max(covariance.trace(), 1e-300);
  return lambda_min > kDegenerateRelTol * scale;
}

DeploymentStats deployment_stats(std::span<const Vector3> positions) {
  if (positions.empty()) throw InvalidArgument("deployment_stats: empty swarm");
  DeploymentStats st;
  const double n = static_cast<double>(positions.size());
  for (const auto& p : positions) {
    if (!p.allFinite()) throw InvalidArgument("deployment_stats: non-finite position");
    st.centroid += p;
  }
  st.centroid /= n;

  st.x.reserve(positions.size());
  for (const auto& p : positions) {
    const Vector3 xi = p - st.centroid;
    st.x.push_back(xi);
    st.covariance += xi * xi.transpose();
    st.radius = std::max(st.radius, xi.norm());
  }
  st.covariance /= n;
  st.lambda_min = std::max(0.0, symmetric_eigenvalues(st.covariance)[0]);
  return st;
}

Vector3 ascending_direction(std::span<const double> sigma_samples, const DeploymentStats& stats) {
  if (sigma_samples.size() != stats.size()) {
    throw InvalidArgument(fmt::format("ascending_direction: {} samples for {} agents",
                                      sigma_samples.size(), stats.size()));
  }
  if (!(stats.radius > 0.0)) {
    throw InvalidArgument("ascending_direction: all agents collocated (D = 0)");
  }
  Vector3 sum = Vector3::Zero();
  for (std::size_t i = 0; i < stats.size(); ++i) sum += sigma_samples[i] * stats.x[i];
  const double n = static_cast<double>(stats.size());
  return sum / (n * stats.radius * stats.radius);
}

double heading_norm_threshold(std::span<const double> sigma_samples) {
  double peak = 0.0;
  for (double s : sigma_samples) peak = std::max(peak, std::abs(s));
  return 1e-9 * (1.0 + peak);
}

UnitVector3 heading_field(const Vector3& l, double eps_norm) {
  const double n = l.norm();
  if (!(n > eps_norm)) {
    throw DegenerateDirection(
        fmt::format("ascending direction norm {:.3g} is below threshold {:.3g}", n, eps_norm));
  }
  return UnitVector3::normalized(l);
}

double pairwise_displacement_bound(double s, double k_w) {
  if (!(s > 0.0) || !(k_w > 0.0)) {
    throw InvalidArgument(fmt::format("pairwise_displacement_bound needs s > 0 and k_w > 0 (s = {}, k_w = {})", s, k_w));
  }
  return 2.0 * std::numbers::pi * s / k_w;
}

double max_tolerable_displacement(const DeploymentStats& stats0) {
  if (!stats0.nondegenerate()) {
    throw DegenerateDeployment(fmt::format(
        "initial deployment is degenerate (lambda_min(P0) = {:.3g}); the non-degeneracy gain "
        "bound requires a full-rank initial covariance",
        stats0.lambda_min));
  }
  const double d0 = stats0.radius;
  const double lam = stats0.lambda_min;
  // Positive root of eps^2 + 2 D0 eps - lambda = 0, written without cancellation.
  return lam / (d0 + std::sqrt(d0 * d0 + lam));
}

double gain_for_nondegeneracy(double s, const DeploymentStats& stats0) {
  const double eps_max = max_tolerable_displacement(stats0);
  if (!(s >= 0.0)) throw InvalidArgument("gain_for_nondegeneracy: speed must be non-negative");
  return 2.0 * std::numbers::pi * s / eps_max;
}

GainPlan plan_gains(double omega_max, double mu_star, double s, const DeploymentStats& stats0) {
  GainPlan plan;
  plan.k1 = gain_for_bounded_rate(omega_max, mu_star);
  plan.epsilon_max = max_tolerable_displacement(stats0);
  plan.k2 = gain_for_nondegeneracy(s, stats0);
  plan.k_w = std::max(plan.k1, plan.k2);
  return plan;
}

double covariance_perturbation_bound(double eps, const DeploymentStats& stats0) {
  if (!(eps >= 0.0)) throw InvalidArgument("covariance_perturbation_bound: eps must be >= 0");
  return 2.0 * stats0.radius * eps + eps * eps;
}

}  // namespace so3seek
