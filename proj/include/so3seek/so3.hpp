#pragma once

// Numerical kernel for the rotation group SO(3) and its Lie algebra so(3).
//
// Conventions:
//   * Body-frame kinematics, R' = R * hat(w).
//   * Rotation vectors (exponential coordinates) are plain Vector3; the
//     principal value returned by log() has angle in [0, pi).
//   * Serialization of a rotation is row-major, 9 values.

#include <array>

#include <Eigen/Dense>

#include "so3seek/errors.hpp"

namespace so3seek {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using RotationVector = Vector3;

namespace so3 {
// Below this angle exp/log switch to truncated Taylor series.
inline constexpr double kSmallAngle = 1e-4;
// log() refuses rotations with tr(R) <= -1 + kTraceGuard.
inline constexpr double kTraceGuard = 1e-6;
inline constexpr double kOrthoTol = 1e-9;
inline constexpr double kSkewTol = 1e-9;
inline constexpr double kUnitTol = 1e-9;
// project_to_so3 only accepts drifted inputs with ||R^T R - I|| below this.
inline constexpr double kProjectTol = 1e-3;
}  // namespace so3

class SkewMatrix;

/// A unit-norm vector, i.e. a point on the 2-sphere.
class UnitVector3 {
 public:
  /// Checked wrap; throws InvalidArgument when | ||v|| - 1 | > tol.
  static UnitVector3 from(const Vector3& v, double tol = so3::kUnitTol);
  /// Normalizes v; throws InvalidArgument if v is zero or non-finite.
  static UnitVector3 normalized(const Vector3& v);

  const Vector3& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  double dot(const UnitVector3& o) const { return v_.dot(o.v_); }

 private:
  explicit UnitVector3(const Vector3& v) : v_(v) {}
  Vector3 v_;
};

/// Element of SO(3). Always satisfies R^T R = I and det R = 1 to 1e-9.
class Rotation {
 public:
  Rotation() : m_(Matrix3::Identity()) {}

  /// Throws InvalidArgument when m is not a rotation within kOrthoTol.
  static Rotation from_matrix(const Matrix3& m);
  /// Row-major 9 values, checked as from_matrix.
  static Rotation from_row_major(const std::array<double, 9>& values);
  static Rotation identity() { return Rotation(); }

  const Matrix3& matrix() const { return m_; }
  Rotation transpose() const { return Rotation(m_.transpose(), Trusted{}); }
  Rotation inverse() const { return transpose(); }
  Vector3 column(int i) const { return m_.col(i); }
  /// Body x-axis, the heading of a unicycle.
  UnitVector3 x_axis() const;
  double trace() const { return m_.trace(); }
  double operator()(int r, int c) const { return m_(r, c); }

  std::array<double, 9> row_major() const;

  Rotation operator*(const Rotation& o) const { return Rotation(m_ * o.m_, Trusted{}); }
  Vector3 operator*(const Vector3& v) const { return m_ * v; }

  /// Largest entry of |R^T R - I|.
  double orthogonality_error() const;

 private:
  struct Trusted {};
  Rotation(const Matrix3& m, Trusted) : m_(m) {}
  friend Rotation exp(const RotationVector& tau);
  friend Rotation project_to_so3(const Matrix3& m);
  Matrix3 m_;
};

/// Element of so(3), S = -S^T.
class SkewMatrix {
 public:
  SkewMatrix() : m_(Matrix3::Zero()) {}
  /// Throws InvalidArgument when ||S + S^T||_F > kSkewTol.
  static SkewMatrix from_matrix(const Matrix3& m);
  static SkewMatrix zero() { return SkewMatrix(); }

  const Matrix3& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }
  double frobenius_norm() const { return m_.norm(); }

  SkewMatrix operator+(const SkewMatrix& o) const { return SkewMatrix(m_ + o.m_, Trusted{}); }
  SkewMatrix operator-(const SkewMatrix& o) const { return SkewMatrix(m_ - o.m_, Trusted{}); }
  SkewMatrix operator-() const { return SkewMatrix(-m_, Trusted{}); }
  SkewMatrix operator*(double k) const { return SkewMatrix(k * m_, Trusted{}); }
  friend SkewMatrix operator*(double k, const SkewMatrix& s) { return s * k; }

 private:
  struct Trusted {};
  SkewMatrix(const Matrix3& m, Trusted) : m_(m) {}
  friend SkewMatrix hat(const Vector3& v);
  friend SkewMatrix adjoint_rotate(const Rotation& r, const SkewMatrix& omega);
  friend SkewMatrix lie_bracket(const SkewMatrix& a, const SkewMatrix& b);
  Matrix3 m_;
};

/// hat(v) u = v x u.
SkewMatrix hat(const Vector3& v);
/// Inverse of hat. Exact component read-off for skew input.
Vector3 vee(const SkewMatrix& s);
/// Checked read-off from a raw matrix; throws InvalidArgument if not skew.
Vector3 vee(const Matrix3& m);

/// Rodrigues' formula. Series branch below kSmallAngle.
Rotation exp(const RotationVector& tau);
inline Rotation exp(const SkewMatrix& s) { return exp(vee(s)); }

/// Principal logarithm as a rotation vector, angle in [0, pi).
/// Throws NearPiSingularity when tr(R) <= -1 + kTraceGuard.
RotationVector log(const Rotation& r);
/// log() in algebra form, hat(log(r)).
SkewMatrix log_matrix(const Rotation& r);

/// Rotation angle of r, arccos((tr R - 1)/2) with the argument clamped.
/// Defined on all of SO(3), including angle pi.
double rotation_angle(const Rotation& r);

/// ||log(R1^T R2)^vee||, in radians.
double dist_geodesic(const Rotation& r1, const Rotation& r2);
/// ||log(R1^T R2)||_F, which is sqrt(2) * dist_geodesic.
double dist_log(const Rotation& r1, const Rotation& r2);
/// ||R1 - R2||_F. No singularity.
double dist_frobenius(const Rotation& r1, const Rotation& r2);

/// Ad_R(Omega) = R Omega R^T; vee form is R * vee(Omega).
SkewMatrix adjoint_rotate(const Rotation& r, const SkewMatrix& omega);
/// ad_A(B) = AB - BA; vee form is vee(A) x vee(B).
SkewMatrix lie_bracket(const SkewMatrix& a, const SkewMatrix& b);

/// <A, B> = tr(A^T B).
double inner(const SkewMatrix& a, const SkewMatrix& b);

/// Time derivative of exponential coordinates tau = log(R) under R' = R Omega:
///   B(Omega) = Omega + 1/2 ad_tau(Omega) + (1 - alpha)/theta^2 ad_tau^2(Omega),
///   alpha(theta) = (theta/2) cot(theta/2).
/// Throws NearPiSingularity when theta is at the principal-log boundary.
SkewMatrix exp_coord_derivative(const RotationVector& tau, const SkewMatrix& omega);

/// Nearest rotation (orthogonal polar factor). Input must be within
/// kProjectTol of orthogonal and have positive determinant.
Rotation project_to_so3(const Matrix3& m);

}  // namespace so3seek
