#pragma once

// Swarm geometry: centroid-relative deployment, covariance, ascending
// direction estimate, and the gain bounds that keep the deployment full rank.

#include <span>
#include <vector>

#include "so3seek/so3.hpp"

namespace so3seek {

struct DeploymentStats {
  Vector3 centroid = Vector3::Zero();
  std::vector<Vector3> x;  // barycentric positions, sum to zero
  Matrix3 covariance = Matrix3::Zero();  // (1/N) sum x_i x_i^T
  double lambda_min = 0.0;
  double radius = 0.0;  // D = max_i ||x_i||

  std::size_t size() const { return x.size(); }
  /// Full-rank covariance, with lambda_min judged relative to the spectrum.
  bool nondegenerate() const;
};

struct GainPlan {
  double k1 = 0.0;  // bounded-rate gain
  double k2 = 0.0;  // non-degeneracy gain
  double k_w = 0.0;
  double epsilon_max = 0.0;
};

/// Throws InvalidArgument for an empty or non-finite swarm.
DeploymentStats deployment_stats(std::span<const Vector3> positions);

/// L = 1/(N D^2) sum_i sigma_i x_i, with sigma_i sampled at centroid + x_i.
/// Throws InvalidArgument on size mismatch or D == 0.
Vector3 ascending_direction(std::span<const double> sigma_samples, const DeploymentStats& stats);

/// Normalization threshold used by heading_field for a given sample set.
double heading_norm_threshold(std::span<const double> sigma_samples);

/// L / ||L||. Throws DegenerateDirection when ||L|| <= eps_norm.
UnitVector3 heading_field(const Vector3& l, double eps_norm);

/// 2 pi s / k_w, the bound on any pairwise displacement under exponential
/// alignment to a shared desired attitude.
double pairwise_displacement_bound(double s, double k_w);

/// Largest pairwise perturbation eps with 2 D0 eps + eps^2 <= lambda_min(P0).
/// Throws DegenerateDeployment when the initial deployment is degenerate.
double max_tolerable_displacement(const DeploymentStats& stats0);

/// 2 pi s / eps_max. Throws DegenerateDeployment for a degenerate stats0.
double gain_for_nondegeneracy(double s, const DeploymentStats& stats0);

/// k1, k2 and k_w = max(k1, k2).
GainPlan plan_gains(double omega_max, double mu_star, double s, const DeploymentStats& stats0);

/// 2 D0 eps + eps^2, the bound on ||P(t) - P(t0)||_2 when every barycentric
/// position moved by at most eps.
double covariance_perturbation_bound(double eps, const DeploymentStats& stats0);

}  // namespace so3seek
