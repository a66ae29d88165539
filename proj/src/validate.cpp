#include "so3seek/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "so3seek/deployment.hpp"
#include "so3seek/field.hpp"

namespace so3seek {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector3 random_vector(Rng& rng, double lo, double hi) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

Vector3 random_direction(Rng& rng) {
  std::normal_distribution<double> n;
  Vector3 v;
  do {
    v = {n(rng), n(rng), n(rng)};
  } while (v.norm() < 1e-9);
  return v.normalized();
}

RotationVector random_rotation_vector(Rng& rng, double max_angle) {
  return uniform(rng, 0.0, max_angle) * random_direction(rng);
}

Rotation random_rotation(Rng& rng) { return exp(random_rotation_vector(rng, std::numbers::pi - 1e-3)); }

PropertyResult finish(std::string name, int samples, double worst, double tol) {
  return {std::move(name), samples, worst, tol, worst <= tol};
}

std::vector<FieldSpec> sample_fields() {
  FieldSpec g;
  g.kind = FieldKind::kGaussian;
  g.source = {1.0, -2.0, 0.5};
  g.amplitude = 3.0;
  g.widths = {1.5, 0.8, 2.0};
  g.axes = {0.3, -0.2, 0.7};

  FieldSpec q;
  q.kind = FieldKind::kQuadratic;
  q.source = {0.0, 1.0, -1.0};
  q.amplitude = 50.0;
  q.curvature = {0.5, 1.0, 2.0};
  q.axes = {-0.4, 0.1, 0.2};
  q.domain_radius = 4.0;

  // Symmetric side bumps leave the central peak as the exact maximum.
  FieldSpec s;
  s.kind = FieldKind::kSumOfGaussians;
  s.source = {0.0, 0.0, 0.0};
  s.amplitude = 3.0;
  s.modes = {GaussianMode{2.0, {0.0, 0.0, 0.0}, {1.0, 1.2, 1.0}, Vector3::Zero()},
             GaussianMode{0.5, {5.0, 0.0, 0.0}, {1.0, 1.5, 1.0}, Vector3::Zero()},
             GaussianMode{0.5, {-5.0, 0.0, 0.0}, {1.0, 1.5, 1.0}, Vector3::Zero()}};
  return {g, q, s};
}

}  // namespace

PropertyResult check_exp_log_roundtrip(const ValidateOptions& opt) {
  Rng rng(opt.seed);
  double worst = 0.0;
  for (int i = 0; i < opt.samples; ++i) {
    const RotationVector tau = random_rotation_vector(rng, std::numbers::pi - 0.1);
    worst = std::max(worst, (log(exp(tau)) - tau).norm());
  }
  return finish("exp/log roundtrip", opt.samples, worst, 1e-9);
}

PropertyResult check_metric_ordering(const ValidateOptions& opt) {
  Rng rng(opt.seed + 1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.samples; ++i) {
    const Rotation r1 = random_rotation(rng);
    const Rotation r2 = r1 * exp(random_rotation_vector(rng, std::numbers::pi - 0.05));
    const double df = dist_frobenius(r1, r2);
    const double dg = dist_geodesic(r1, r2);
    const double dl = dist_log(r1, r2);
    worst = std::max({worst, df - std::numbers::sqrt2 * dg, std::abs(std::numbers::sqrt2 * dg - dl)});
  }
  return finish("metric ordering d_F <= sqrt2 d_SO3 = d_log", opt.samples, worst, 1e-12);
}

PropertyResult check_ad_invariance(const ValidateOptions& opt) {
  Rng rng(opt.seed + 2);
  double worst = 0.0;
  for (int i = 0; i < opt.samples; ++i) {
    const Rotation r = random_rotation(rng);
    const SkewMatrix a = hat(random_vector(rng, -3.0, 3.0));
    const SkewMatrix b = hat(random_vector(rng, -3.0, 3.0));
    worst = std::max(worst, std::abs(inner(adjoint_rotate(r, a), adjoint_rotate(r, b)) - inner(a, b)));
  }
  return finish("Ad-invariance of <.,.>", opt.samples, worst, 1e-10);
}

PropertyResult check_bracket_skew_identity(const ValidateOptions& opt) {
  Rng rng(opt.seed + 3);
  double worst = 0.0;
  for (int i = 0; i < opt.samples; ++i) {
    const SkewMatrix a = hat(random_vector(rng, -3.0, 3.0));
    const SkewMatrix b = hat(random_vector(rng, -3.0, 3.0));
    const SkewMatrix c = hat(random_vector(rng, -3.0, 3.0));
    worst = std::max(worst, std::abs(inner(lie_bracket(a, b), c) + inner(b, lie_bracket(a, c))));
  }
  return finish("<ad_A B, C> = -<B, ad_A C>", opt.samples, worst, 1e-10);
}

PropertyResult check_exp_coord_derivative(const ValidateOptions& opt) {
  Rng rng(opt.seed + 4);
  constexpr double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < opt.samples; ++i) {
    const RotationVector tau = random_rotation_vector(rng, std::numbers::pi - 0.3);
    const Vector3 w = random_vector(rng, -2.0, 2.0);
    const Rotation r = exp(tau);
    const Vector3 fd = (log(r * exp(h * w)) - log(r * exp(-h * w))) / (2.0 * h);
    worst = std::max(worst, (vee(exp_coord_derivative(tau, hat(w))) - fd).norm());
  }
  return finish("exp-coordinate derivative vs central differences", opt.samples, worst, 1e-4);
}

PropertyResult check_field_gradients(const ValidateOptions& opt) {
  Rng rng(opt.seed + 5);
  constexpr double h = 1e-5;
  double worst = 0.0;
  int count = 0;
  for (const FieldSpec& spec : sample_fields()) {
    const ScalarField f = ScalarField::create(spec);
    const int per_kind = std::max(1, opt.samples / 3);
    for (int i = 0; i < per_kind; ++i, ++count) {
      const Vector3 p = spec.source + random_vector(rng, -3.0, 3.0);
      const Vector3 g = f.gradient(p);
      Vector3 fd;
      for (int a = 0; a < 3; ++a) {
        Vector3 e = Vector3::Zero();
        e[a] = h;
        fd[a] = (f.value(p + e) - f.value(p - e)) / (2.0 * h);
      }
      const double scale = std::max(g.norm(), 1e-3 * spec.amplitude);
      worst = std::max(worst, (g - fd).norm() / scale);
    }
  }
  return finish("field gradient vs central differences (relative)", count, worst, 1e-6);
}

PropertyResult check_weyl_chain(const ValidateOptions& opt) {
  Rng rng(opt.seed + 6);
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < opt.samples; ++s) {
    const int n = 3 + static_cast<int>(rng() % 10);
    std::vector<Vector3> p0, p1;
    const double move = uniform(rng, 0.0, 0.5);
    for (int i = 0; i < n; ++i) {
      p0.push_back(random_vector(rng, -2.0, 2.0));
      p1.push_back(p0.back() + move * random_vector(rng, -1.0, 1.0));
    }
    const DeploymentStats s0 = deployment_stats(p0);
    const DeploymentStats s1 = deployment_stats(p1);
    double eps = 0.0;
    for (int i = 0; i < n; ++i) eps = std::max(eps, (s1.x[i] - s0.x[i]).norm());
    const double violation = (s0.lambda_min - covariance_perturbation_bound(eps, s0)) - s1.lambda_min;
    worst = std::max(worst, violation);
  }
  return finish("Weyl chain lambda(P1) >= lambda(P0) - (2 D0 eps + eps^2)", opt.samples, worst, 1e-9);
}

PropertyResult check_pair_displacement(const ValidateOptions& opt) {
  const int runs = std::max(1, opt.samples / 500);
  double worst = 0.0;
  for (int r = 0; r < runs; ++r) {
    SimConfig cfg;
    cfg.n_agents = 4;
    cfg.speed = 1.0;
    cfg.dt = 0.005;
    cfg.t_end = 6.0;
    cfg.seed = opt.seed + 100 + static_cast<std::uint64_t>(r);
    cfg.controller.k_w = 2.0;
    cfg.law = ControlLawKind::kFullFeedForward;
    cfg.desired.mode = DesiredMode::kPrescribedRates;
    cfg.desired.frame = RateFrame::kBody;
    cfg.desired.omega_known = {0.4, -0.3, 0.2};
    cfg.placement.radius = 3.0;
    cfg.placement.attitude_spread = 2.8;
    Simulation sim(cfg);
    const double bound = pairwise_displacement_bound(cfg.speed, sim.info().k_w);
    sim.run([&](const StepRecord& rec) { worst = std::max(worst, rec.max_pair_displacement / bound); });
  }
  return finish("pairwise displacement / (2 pi s / k_w)", runs, worst, 1.0);
}

PropertyResult check_decay_slope(const ValidateOptions& opt, const ControlLaw& law) {
  SimConfig cfg;
  cfg.n_agents = 1;
  cfg.speed = 1.0;
  cfg.controller.k_w = 2.0;
  cfg.dt = 0.005;
  cfg.t_end = 7.5;
  cfg.seed = opt.seed + 7;
  cfg.law = ControlLawKind::kFullFeedForward;
  cfg.desired.mode = DesiredMode::kPrescribedRates;
  cfg.desired.frame = RateFrame::kBody;
  cfg.desired.omega_known = {0.6, -0.4, 0.8};
  cfg.placement.kind = PlacementKind::kExplicit;
  cfg.placement.positions = {Vector3::Zero()};
  cfg.placement.attitude_spread = 2.5;

  Simulation sim(cfg, law);
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  bool open = true;
  sim.run([&](const StepRecord& rec) {
    const double mu = rec.mu[0];
    if (!open || !(mu >= 1e-6)) {
      open = false;
      return;
    }
    const double y = std::log(mu);
    st += rec.t;
    sy += y;
    stt += rec.t * rec.t;
    sty += rec.t * y;
    ++n;
  });
  double rel = std::numeric_limits<double>::infinity();
  if (n >= 2) {
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    rel = std::abs(slope + sim.info().k_w) / sim.info().k_w;
  }
  return finish("closed-loop log-decay slope vs -k_w (relative)", n, rel, 0.02);
}

std::vector<PropertyResult> run_validation(const ValidateOptions& opt) {
  return {check_exp_log_roundtrip(opt), check_metric_ordering(opt),  check_ad_invariance(opt),
          check_bracket_skew_identity(opt), check_exp_coord_derivative(opt), check_field_gradients(opt),
          check_weyl_chain(opt),          check_pair_displacement(opt),           check_decay_slope(opt)};
}

}  // namespace so3seek
