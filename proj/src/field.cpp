#include "so3seek/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace so3seek {

namespace {

Matrix3 principal_form(const Vector3& diag, const RotationVector& axes) {
  const Matrix3 q = exp(axes).matrix();
  return q * diag.asDiagonal() * q.transpose();
}

void require_positive(const Vector3& v, const char* what) {
  if (!v.allFinite() || !(v.minCoeff() > 0.0)) {
    throw ConfigError(fmt::format("field {} must be positive and finite", what));
  }
}

}  // namespace

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::kGaussian: return "gaussian";
    case FieldKind::kQuadratic: return "quadratic";
    case FieldKind::kSumOfGaussians: return "sum-of-gaussians";
  }
  return "?";
}

FieldKind field_kind_from_string(std::string_view name) {
  if (name == "gaussian") return FieldKind::kGaussian;
  if (name == "quadratic") return FieldKind::kQuadratic;
  if (name == "sum-of-gaussians") return FieldKind::kSumOfGaussians;
  throw ConfigError(fmt::format("unknown field kind '{}'", name));
}

ScalarField ScalarField::create(const FieldSpec& spec) {
  ScalarField f(spec);
  if (!spec.source.allFinite()) throw ConfigError("field source must be finite");

  auto add_bump = [&f](double amplitude, const Vector3& center, const Vector3& widths,
                       const RotationVector& axes) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
      throw ConfigError("gaussian amplitude must be positive");
    }
    require_positive(widths, "widths");
    const Vector3 inv_var = widths.cwiseProduct(widths).cwiseInverse();
    f.bumps_.push_back({amplitude, center, principal_form(inv_var, axes)});
  };

  switch (spec.kind) {
    case FieldKind::kGaussian:
      add_bump(spec.amplitude, spec.source, spec.widths, spec.axes);
      break;

    case FieldKind::kQuadratic: {
      require_positive(spec.curvature, "curvature");
      if (!(spec.domain_radius > 0.0)) throw ConfigError("quadratic field needs domain_radius > 0");
      f.curvature_ = principal_form(spec.curvature, spec.axes);
      const double floor =
          spec.amplitude - spec.curvature.maxCoeff() * spec.domain_radius * spec.domain_radius;
      if (!(floor > 0.0)) {
        throw ConfigError(fmt::format(
            "quadratic field is not positive on its domain: amplitude {} - max curvature * r^2 = {}",
            spec.amplitude, floor));
      }
      break;
    }

    case FieldKind::kSumOfGaussians: {
      if (spec.modes.empty()) throw ConfigError("sum-of-gaussians field needs at least one mode");
      for (const auto& m : spec.modes) add_bump(m.amplitude, m.center, m.widths, m.axes);

      // The declared source must be a critical point and dominate a coarse
      // grid covering every mode out to three widths.
      double amp_sum = 0.0;
      double min_width = std::numeric_limits<double>::infinity();
      Vector3 lo = spec.source, hi = spec.source;
      for (const auto& m : spec.modes) {
        amp_sum += m.amplitude;
        min_width = std::min(min_width, m.widths.minCoeff());
        const double reach = 3.0 * m.widths.maxCoeff();
        lo = lo.cwiseMin(m.center - Vector3::Constant(reach));
        hi = hi.cwiseMax(m.center + Vector3::Constant(reach));
      }
      const double grad_tol = 1e-6 * amp_sum / min_width;
      const double g = f.gradient(spec.source).norm();
      if (g > grad_tol) {
        throw ConfigError(fmt::format(
            "declared source is not a critical point of the field (|grad| = {:.3g})", g));
      }
      const double peak = f.value(spec.source);
      constexpr int kGrid = 21;
      for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j)
          for (int k = 0; k < kGrid; ++k) {
            const Vector3 t(i, j, k);
            const Vector3 p = lo + (hi - lo).cwiseProduct(t / (kGrid - 1));
            if (f.value(p) > peak * (1.0 + 1e-12)) {
              throw ConfigError(fmt::format(
                  "declared source is not the global maximum: sigma({}, {}, {}) exceeds sigma(source)",
                  p.x(), p.y(), p.z()));
            }
          }
      break;
    }
  }
  return f;
}

double ScalarField::value(const Vector3& p) const {
  if (spec_.kind == FieldKind::kQuadratic) {
    const Vector3 d = p - spec_.source;
    return spec_.amplitude - d.dot(curvature_ * d);
  }
  double v = 0.0;
  for (const auto& b : bumps_) {
    const Vector3 d = p - b.center;
    v += b.amplitude * std::exp(-0.5 * d.dot(b.precision * d));
  }
  return v;
}

Vector3 ScalarField::gradient(const Vector3& p) const {
  if (spec_.kind == FieldKind::kQuadratic) {
    return -2.0 * curvature_ * (p - spec_.source);
  }
  Vector3 g = Vector3::Zero();
  for (const auto& b : bumps_) {
    const Vector3 d = p - b.center;
    const Vector3 sd = b.precision * d;
    g -= b.amplitude * std::exp(-0.5 * d.dot(sd)) * sd;
  }
  return g;
}

}  // namespace so3seek
