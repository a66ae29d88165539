#pragma once

// Ground-truth scalar fields with a unique maximum at a known source.

#include <string_view>
#include <vector>

#include "so3seek/so3.hpp"

namespace so3seek {

enum class FieldKind { kGaussian, kQuadratic, kSumOfGaussians };

std::string_view to_string(FieldKind kind);
/// Throws ConfigError for an unknown name.
FieldKind field_kind_from_string(std::string_view name);

/// One gaussian bump, A exp(-1/2 d^T S^-1 d) with d = p - center and
/// S = Q diag(widths^2) Q^T, Q = exp(axes).
struct GaussianMode {
  double amplitude = 1.0;
  Vector3 center = Vector3::Zero();
  Vector3 widths = Vector3::Ones();  // standard deviations along the principal axes
  RotationVector axes = Vector3::Zero();
};

struct FieldSpec {
  FieldKind kind = FieldKind::kGaussian;
  Vector3 source = Vector3::Zero();
  double amplitude = 1.0;

  // gaussian
  Vector3 widths = Vector3::Ones();
  RotationVector axes = Vector3::Zero();

  // quadratic: A - d^T C d, C = Q diag(curvature) Q^T, positive on the ball
  // of radius domain_radius about the source.
  Vector3 curvature = Vector3::Ones();
  double domain_radius = 1.0;

  // sum-of-gaussians; `source` must be the global maximum of the sum.
  std::vector<GaussianMode> modes;
};

/// Validated field. Evaluation is pure and thread-safe.
class ScalarField {
 public:
  /// Throws ConfigError when the spec violates its kind's invariants
  /// (non-positive widths or curvature, negative values on the declared
  /// domain, or a declared source that is not the numerical maximum).
  static ScalarField create(const FieldSpec& spec);

  double value(const Vector3& p) const;
  Vector3 gradient(const Vector3& p) const;

  const FieldSpec& spec() const { return spec_; }
  const Vector3& source() const { return spec_.source; }

 private:
  struct Bump {
    double amplitude;
    Vector3 center;
    Matrix3 precision;
  };
  explicit ScalarField(FieldSpec spec) : spec_(std::move(spec)) {}

  FieldSpec spec_;
  std::vector<Bump> bumps_;
  Matrix3 curvature_ = Matrix3::Zero();
};

}  // namespace so3seek
