#include "so3seek/sym_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace so3seek {

namespace {

constexpr double kNearRepeated = 1e-6;
constexpr double kClusterTol = 1e-10;

std::array<double, 3> iterative(const Matrix3& a) {
  Eigen::SelfAdjointEigenSolver<Matrix3> solver(a, Eigen::EigenvaluesOnly);
  const Vector3 ev = solver.eigenvalues();  // ascending
  return {ev[0], ev[1], ev[2]};
}

}  // namespace

EigenResult symmetric_eigenvalues_detailed(const Matrix3& a_in) {
  const Matrix3 a = 0.5 * (a_in + a_in.transpose());
  const double q = a.trace() / 3.0;
  const Matrix3 b = a - q * Matrix3::Identity();
  const double p = std::sqrt((b * b).trace() / 6.0);
  const double scale = std::max({std::abs(q), p, 1e-300});

  EigenResult out;
  if (p <= kClusterTol * scale) {
    out.values = iterative(a);
    out.refined = true;
    return out;
  }
  const double r = std::clamp((b / p).determinant() / 2.0, -1.0, 1.0);
  // |r| -> 1 means a repeated root; acos loses half the digits there.
  if (std::abs(r) > 1.0 - kNearRepeated) {
    out.values = iterative(a);
    out.refined = true;
    return out;
  }
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double mid = 3.0 * q - hi - lo;
  out.values = {lo, mid, hi};
  std::sort(out.values.begin(), out.values.end());

  const double gap = std::min(out.values[1] - out.values[0], out.values[2] - out.values[1]);
  if (gap <= kClusterTol * scale) {
    out.values = iterative(a);
    out.refined = true;
  }
  return out;
}

std::array<double, 3> symmetric_eigenvalues(const Matrix3& a) {
  return symmetric_eigenvalues_detailed(a).values;
}

double symmetric_spectral_norm(const Matrix3& a) {
  const auto ev = symmetric_eigenvalues(a);
  return std::max(std::abs(ev[0]), std::abs(ev[2]));
}

}  // namespace so3seek
