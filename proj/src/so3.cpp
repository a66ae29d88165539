#include "so3seek/so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>
#include <fmt/core.h>

namespace so3seek {

namespace {

bool all_finite(const Matrix3& m) { return m.allFinite(); }

// sin(t)/t and (1 - cos t)/t^2 with series below the small-angle threshold.
double sinc(double t) {
  if (t < so3::kSmallAngle) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0;
  }
  return std::sin(t) / t;
}

double one_minus_cos_over_sq(double t) {
  if (t < so3::kSmallAngle) {
    const double t2 = t * t;
    return 0.5 - t2 / 24.0 + t2 * t2 / 720.0 - t2 * t2 * t2 / 40320.0;
  }
  return (1.0 - std::cos(t)) / (t * t);
}

void check_log_domain(double trace, const char* where) {
  if (!(trace > -1.0 + so3::kTraceGuard)) {
    throw NearPiSingularity(
        fmt::format("{}: tr(R) = {:.17g} is within {} of -1, principal log undefined", where,
                    trace, so3::kTraceGuard));
  }
}

}  // namespace

UnitVector3 UnitVector3::from(const Vector3& v, double tol) {
  const double n = v.norm();
  if (!v.allFinite() || std::abs(n - 1.0) > tol) {
    throw InvalidArgument(fmt::format("vector norm {:.17g} is not 1 within {}", n, tol));
  }
  return UnitVector3(v);
}

UnitVector3 UnitVector3::normalized(const Vector3& v) {
  const double n = v.norm();
  if (!v.allFinite() || !(n > 0.0)) {
    throw InvalidArgument("cannot normalize a zero or non-finite vector");
  }
  return UnitVector3(v / n);
}

Rotation Rotation::from_matrix(const Matrix3& m) {
  if (!all_finite(m)) throw InvalidArgument("rotation has non-finite entries");
  const double ortho = (m.transpose() * m - Matrix3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > so3::kOrthoTol) {
    throw InvalidArgument(fmt::format("matrix is not orthonormal (max |R^T R - I| = {:.3g})", ortho));
  }
  const double det = m.determinant();
  if (std::abs(det - 1.0) > so3::kOrthoTol) {
    throw InvalidArgument(fmt::format("matrix has det = {:.17g}, expected 1", det));
  }
  return Rotation(m, Trusted{});
}

Rotation Rotation::from_row_major(const std::array<double, 9>& values) {
  Matrix3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = values[static_cast<std::size_t>(3 * r + c)];
  return from_matrix(m);
}

UnitVector3 Rotation::x_axis() const { return UnitVector3::normalized(m_.col(0)); }

std::array<double, 9> Rotation::row_major() const {
  std::array<double, 9> out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(3 * r + c)] = m_(r, c);
  return out;
}

double Rotation::orthogonality_error() const {
  return (m_.transpose() * m_ - Matrix3::Identity()).cwiseAbs().maxCoeff();
}

SkewMatrix SkewMatrix::from_matrix(const Matrix3& m) {
  if (!all_finite(m)) throw InvalidArgument("skew matrix has non-finite entries");
  const double asym = (m + m.transpose()).norm();
  if (asym > so3::kSkewTol) {
    throw InvalidArgument(fmt::format("matrix is not skew (||S + S^T||_F = {:.3g})", asym));
  }
  return SkewMatrix(m, Trusted{});
}

SkewMatrix hat(const Vector3& v) {
  Matrix3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return SkewMatrix(m, SkewMatrix::Trusted{});
}

Vector3 vee(const SkewMatrix& s) { return {s(2, 1), s(0, 2), s(1, 0)}; }

Vector3 vee(const Matrix3& m) { return vee(SkewMatrix::from_matrix(m)); }

Rotation exp(const RotationVector& tau) {
  const double theta = tau.norm();
  const Matrix3 k = hat(tau).matrix();
  Matrix3 r = Matrix3::Identity() + sinc(theta) * k + one_minus_cos_over_sq(theta) * (k * k);
  return Rotation(r, Rotation::Trusted{});
}

double rotation_angle(const Rotation& r) {
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

RotationVector log(const Rotation& r) {
  const double trace = r.trace();
  check_log_domain(trace, "log");
  // sin(theta) * axis read off the antisymmetric part; pairing it with cos(theta)
  // in atan2 keeps the angle accurate at both ends of [0, pi).
  const Matrix3& m = r.matrix();
  const Vector3 s{0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
  const double sin_theta = s.norm();
  const double cos_theta = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::atan2(sin_theta, cos_theta);
  if (theta == 0.0) return Vector3::Zero();
  // theta / sin(theta), series near zero.
  double factor;
  if (theta < so3::kSmallAngle) {
    const double t2 = theta * theta;
    factor = 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0 + 31.0 * t2 * t2 * t2 / 15120.0;
  } else {
    factor = theta / sin_theta;
  }
  return factor * s;
}

SkewMatrix log_matrix(const Rotation& r) { return hat(log(r)); }

double dist_geodesic(const Rotation& r1, const Rotation& r2) {
  return log(r1.transpose() * r2).norm();
}

double dist_log(const Rotation& r1, const Rotation& r2) {
  return log_matrix(r1.transpose() * r2).frobenius_norm();
}

double dist_frobenius(const Rotation& r1, const Rotation& r2) {
  return (r1.matrix() - r2.matrix()).norm();
}

SkewMatrix adjoint_rotate(const Rotation& r, const SkewMatrix& omega) {
  const Matrix3 m = r.matrix() * omega.matrix() * r.matrix().transpose();
  // Re-skew to strip O(eps) symmetric residue from the triple product.
  return SkewMatrix(0.5 * (m - m.transpose()), SkewMatrix::Trusted{});
}

SkewMatrix lie_bracket(const SkewMatrix& a, const SkewMatrix& b) {
  return SkewMatrix(a.matrix() * b.matrix() - b.matrix() * a.matrix(), SkewMatrix::Trusted{});
}

double inner(const SkewMatrix& a, const SkewMatrix& b) {
  return (a.matrix().transpose() * b.matrix()).trace();
}

SkewMatrix exp_coord_derivative(const RotationVector& tau, const SkewMatrix& omega) {
  const double theta = tau.norm();
  check_log_domain(1.0 + 2.0 * std::cos(theta), "exp_coord_derivative");
  if (theta >= std::numbers::pi) {
    throw NearPiSingularity("exp_coord_derivative: rotation angle outside [0, pi)");
  }
  // (1 - alpha(theta)) / theta^2 with alpha = (theta/2) cot(theta/2).
  double coeff;
  if (theta < so3::kSmallAngle) {
    const double t2 = theta * theta;
    coeff = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    const double half = 0.5 * theta;
    const double alpha = half * std::cos(half) / std::sin(half);
    coeff = (1.0 - alpha) / (theta * theta);
  }
  const SkewMatrix t = hat(tau);
  const SkewMatrix ad1 = lie_bracket(t, omega);
  const SkewMatrix ad2 = lie_bracket(t, ad1);
  return omega + 0.5 * ad1 + coeff * ad2;
}

Rotation project_to_so3(const Matrix3& m) {
  if (!all_finite(m)) throw InvalidArgument("project_to_so3: non-finite input");
  const double drift = (m.transpose() * m - Matrix3::Identity()).norm();
  if (drift >= so3::kProjectTol) {
    throw InvalidArgument(fmt::format("project_to_so3: drift {:.3g} exceeds {}", drift, so3::kProjectTol));
  }
  if (m.determinant() <= 0.0) throw InvalidArgument("project_to_so3: reflection input");
  Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 r = svd.matrixU() * svd.matrixV().transpose();
  return Rotation(r, Rotation::Trusted{});
}

}  // namespace so3seek
