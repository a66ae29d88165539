#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "so3seek/errors.hpp"
#include "so3seek/field.hpp"

using namespace so3seek;

namespace {

FieldSpec gaussian(const Vector3& source, double amp, const Vector3& widths, const Vector3& axes = Vector3::Zero()) {
  FieldSpec s;
  s.kind = FieldKind::kGaussian;
  s.source = source;
  s.amplitude = amp;
  s.widths = widths;
  s.axes = axes;
  return s;
}

FieldSpec quadratic(const Vector3& source, double amp, const Vector3& curv, double radius) {
  FieldSpec s;
  s.kind = FieldKind::kQuadratic;
  s.source = source;
  s.amplitude = amp;
  s.curvature = curv;
  s.domain_radius = radius;
  return s;
}

Vector3 central_difference(const ScalarField& f, const Vector3& p, double h) {
  Vector3 g;
  for (int a = 0; a < 3; ++a) {
    Vector3 e = Vector3::Zero();
    e[a] = h;
    g[a] = (f.value(p + e) - f.value(p - e)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST(Field, GaussianPeakAndGradient) {
  const Vector3 src(1, -2, 3);
  const ScalarField f = ScalarField::create(gaussian(src, 2.5, {1.5, 0.7, 2.0}, {0.3, 0.1, -0.4}));
  EXPECT_NEAR(f.value(src), 2.5, 1e-15);
  EXPECT_LE(f.gradient(src).norm(), 1e-15);
}

TEST(Field, IsotropicGaussianGradientPointsAtSource) {
  const Vector3 src(4, 0, -1);
  const double w = 1.7;
  const ScalarField f = ScalarField::create(gaussian(src, 3.0, {w, w, w}));
  for (double r : {-2.0, -0.5, 0.3, 1.0, 2.5}) {
    const Vector3 p = src + Vector3(r, 0, 0);
    const double expected = 3.0 * std::exp(-0.5 * r * r / (w * w));
    EXPECT_NEAR(f.value(p), expected, 1e-15);
    const Vector3 g = f.gradient(p);
    EXPECT_NEAR(g.x(), -(r / (w * w)) * expected, 1e-14);
    EXPECT_NEAR(g.y(), 0.0, 1e-15);
    EXPECT_NEAR(g.z(), 0.0, 1e-15);
  }
}

TEST(Field, QuadraticValues) {
  const Vector3 src(0, 1, 0);
  const ScalarField f = ScalarField::create(quadratic(src, 10.0, {1.0, 2.0, 0.5}, 2.0));
  EXPECT_NEAR(f.value(src), 10.0, 1e-15);
  EXPECT_NEAR(f.value(src + Vector3(1, 0, 0)), 9.0, 1e-14);
  EXPECT_NEAR(f.value(src + Vector3(0, 1, 0)), 8.0, 1e-14);
  EXPECT_LE((f.gradient(src + Vector3(0, 0, 2)) - Vector3(0, 0, -2)).norm(), 1e-14);
}

TEST(Field, GradientsMatchFiniteDifferences) {
  std::vector<FieldSpec> specs{gaussian({1, 2, 3}, 3.0, {1.5, 0.8, 2.0}, {0.3, -0.2, 0.7}),
                               quadratic({0, 1, -1}, 50.0, {0.5, 1.0, 2.0}, 4.0)};
  specs.back().axes = {-0.4, 0.1, 0.2};
  FieldSpec sum;
  sum.kind = FieldKind::kSumOfGaussians;
  sum.source = Vector3::Zero();
  sum.modes = {GaussianMode{2.0, {0, 0, 0}, {1.0, 1.2, 1.0}, Vector3::Zero()},
               GaussianMode{0.5, {5, 0, 0}, {1.0, 1.5, 1.0}, Vector3(0.4, 0, 0)},
               GaussianMode{0.5, {-5, 0, 0}, {1.0, 1.5, 1.0}, Vector3(0.4, 0, 0)}};
  specs.push_back(sum);

  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-3, 3);
  for (const FieldSpec& spec : specs) {
    const ScalarField f = ScalarField::create(spec);
    for (int i = 0; i < 500; ++i) {
      const Vector3 p = spec.source + Vector3(u(rng), u(rng), u(rng));
      const Vector3 g = f.gradient(p);
      const double scale = std::max(g.norm(), 1e-3 * spec.amplitude);
      EXPECT_LE((g - central_difference(f, p, 1e-5)).norm() / scale, 1e-6) << to_string(spec.kind);
    }
  }
}

TEST(Field, RejectsBadSpecs) {
  EXPECT_THROW(ScalarField::create(gaussian({0, 0, 0}, 1.0, {1.0, 0.0, 1.0})), ConfigError);
  EXPECT_THROW(ScalarField::create(gaussian({0, 0, 0}, -1.0, {1.0, 1.0, 1.0})), ConfigError);
  // A - c r^2 < 0 on the domain.
  EXPECT_THROW(ScalarField::create(quadratic({0, 0, 0}, 1.0, {1.0, 1.0, 1.0}, 2.0)), ConfigError);
  EXPECT_THROW(ScalarField::create(quadratic({0, 0, 0}, 10.0, {1.0, -1.0, 1.0}, 1.0)), ConfigError);

  FieldSpec sum;
  sum.kind = FieldKind::kSumOfGaussians;
  EXPECT_THROW(ScalarField::create(sum), ConfigError);
  // Declared source is not the maximum.
  sum.source = Vector3::Zero();
  sum.modes = {GaussianMode{1.0, {0, 0, 0}, {1, 1, 1}, Vector3::Zero()},
               GaussianMode{3.0, {6, 0, 0}, {1, 1, 1}, Vector3::Zero()}};
  EXPECT_THROW(ScalarField::create(sum), ConfigError);

  EXPECT_THROW(field_kind_from_string("cubic"), ConfigError);
  EXPECT_EQ(field_kind_from_string(to_string(FieldKind::kSumOfGaussians)), FieldKind::kSumOfGaussians);
}
