#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relpower/error.hpp"
#include "relpower/harness.hpp"
#include "support.hpp"

#include <numbers>

using namespace relpower;
using testing::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

MaterialModel graded_stvk() {
  return MaterialModel::st_venant_kirchhoff(ModulusField::affine(1.2, {0.2, -0.1, 0.3}),
                                            ModulusField::affine(0.8, {-0.1, 0.25, 0.15}));
}

Motion wavy() { return motions::sinusoidal(0.05, {1.5, -1, 2}, {0.3, 1, -0.5}); }

VirtualFieldPair rotational_pair() {
  return {fields::sinusoidal(0.1, {1, 2, -1}, {1, 0.5, 0.2}) + fields::linear(Tensor33{0.02, 0.1, 0, -0.05, 0, 0.03, 0, 0.04, -0.01}),
          fields::rigid({0.1, -0.05, 0.02}, {0.1, 0.2, -0.15}, {}) + fields::sinusoidal(0.05, {0, 1, 1}, {1, 0, 0})};
}

VirtualFieldPair irrotational_pair() {
  return {rotational_pair().v,
          fields::constant({0.1, -0.05, 0.02}) + fields::sinusoidal(0.05, {1, 1, 0}, {1, 1, 0})};
}

BodyPart unit_box(int order = 6) { return BodyPart::box({}, {0.5, 0.5, 0.5}, {order}); }

}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  for (int n = 1; n <= 12; ++n) {
    const GaussRule g = gauss_legendre(n);
    double sum = 0.0, top = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      CHECK(g.weights[i] > 0.0);
      sum += g.weights[i];
      top += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(top == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("sphere rules") {
  for (const auto& rule : {lebedev26(), product_sphere_rule(8)}) {
    double area = 0.0, x4 = 0.0;
    Vector3 first;
    for (const auto& n : rule) {
      area += n.weight;
      x4 += n.weight * std::pow(n.direction[0], 4);
      first += n.weight * n.direction;
      CHECK(norm(n.direction) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(area == doctest::Approx(4 * kPi).epsilon(1e-13));
    CHECK(x4 == doctest::Approx(4 * kPi / 5).epsilon(1e-13));
    CHECK(max_abs(first) < 1e-14);
  }
}

TEST_CASE("volume and surface integral oracles") {
  const BodyPart cube = BodyPart::box({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5});
  CHECK(volume_integral(cube, [](const Vector3&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(volume_integral(cube, [](const Vector3& x) { return x[0] * x[0]; }) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(volume_integral(unit_box(), [](const Vector3& x) { return x[0] * x[1] * x[1] + x[2]; })) < 1e-14);
  CHECK(surface_integral(cube, [](const Vector3& x, const Vector3& n) { return dot(x, n); }) ==
        doctest::Approx(3.0).epsilon(1e-14));

  for (const BodyPart& part : {BodyPart::box({0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}), BodyPart::ball({1, 0, 0}, 0.7),
                               BodyPart::shell({0, 0, 0}, 0.3, 0.9)}) {
    double weights = 0.0;
    for (const auto& n : part.volume_nodes()) {
      CHECK(n.weight > 0.0);
      weights += n.weight;
    }
    CHECK(weights == doctest::Approx(part.measure()).epsilon(1e-12));
    const Vector3 closed = surface_integral(part, [](const Vector3&, const Vector3& n) { return n; });
    CHECK(max_abs(closed) <= 1e-10 * part.boundary_area());
    const double area = surface_integral(part, [](const Vector3&, const Vector3&) { return 1.0; });
    CHECK(area == doctest::Approx(part.boundary_area()).epsilon(1e-12));
  }
  const BodyPart sphere = BodyPart::ball({}, 1.0);
  CHECK(std::abs(surface_integral(sphere, [](const Vector3&, const Vector3&) { return 1.0; }) - 4 * kPi) < 1e-8);
}

TEST_CASE("part helpers") {
  const BodyPart b = BodyPart::box({0, 0, 0}, {1, 0.5, 0.25});
  CHECK(b.length_scale() == 2.0);
  CHECK(b.contains({0.9, 0.4, -0.2}));
  CHECK_FALSE(b.contains({0.9, 0.6, 0}));
  const auto [lo, hi] = b.split(0);
  CHECK(lo.measure() + hi.measure() == doctest::Approx(b.measure()));
  CHECK_THROWS_AS(BodyPart::ball({}, 1).split(0), Error);
  CHECK_THROWS_AS(BodyPart::shell({}, 1, 0.5), Error);
  CHECK(BodyPart::shell({}, 0.5, 1).contains({0.7, 0, 0}));
  CHECK_FALSE(BodyPart::shell({}, 0.5, 1).contains({0.2, 0, 0}));
}

TEST_CASE("relative power bookkeeping and trivial limits") {
  const Scenario s(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Closure);
  const EvaluatedPart ep(s, unit_box());
  const RelativePower p = relative_power(ep, rotational_pair());
  CHECK(p.total() == p.actions() + p.disarrangement());

  // v = F w pointwise: the actions vanish.
  const VectorField w = fields::constant({0.2, -0.1, 0.3});
  const Motion m = s.motion();
  const VectorField v([m, w](const Vector3& x) { return m.deformation_gradient(x) * w(x); });
  const RelativePower pa = relative_power(ep, {v, w});
  CHECK(std::abs(pa.actions()) < 1e-15);

  // w = 0: the standard external power.
  const VirtualFieldPair only_v{rotational_pair().v, fields::zero()};
  const RelativePower ps = relative_power(ep, only_v);
  CHECK(std::abs(ps.total() - standard_external_power(ep, only_v.v)) <= 1e-12 * std::max(1.0, ps.gross()));

  // w = 0: inner power is ∫ P·∇v.
  const InnerPower in = inner_relative_power(ep, only_v);
  CHECK(in.eshelby == 0.0);
  CHECK(in.skew == 0.0);
  CHECK(in.couple == 0.0);
}

TEST_CASE("relative power is linear in (v, w)") {
  const Scenario s(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Closure);
  const EvaluatedPart ep(s, unit_box());
  const VirtualFieldPair a = rotational_pair(), b = irrotational_pair();
  const VirtualFieldPair ab{2.0 * a.v + (-0.5) * b.v, 2.0 * a.w + (-0.5) * b.w};
  const double lhs = relative_power(ep, ab).total();
  const double rhs = 2.0 * relative_power(ep, a).total() - 0.5 * relative_power(ep, b).total();
  CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("additivity of the volume terms over a split part") {
  PresetSources p;
  p.body_force = [](const Vector3&) { return Vector3{0.3, -0.2, 0.1}; };
  p.driving_force = [](const Vector3&) { return Vector3{0.05, 0.1, -0.02}; };
  p.couple = [](const Vector3&) { return Vector3{0.02, -0.01, 0.03}; };
  const Scenario s(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Preset, p);
  const BodyPart whole = unit_box(8);
  const auto [lo, hi] = whole.split(1);
  const VirtualFieldPair pair = rotational_pair();
  const RelativePower pw = relative_power(EvaluatedPart(s, whole), pair);
  const RelativePower pl = relative_power(EvaluatedPart(s, lo), pair);
  const RelativePower ph = relative_power(EvaluatedPart(s, hi), pair);
  auto volume = [](const RelativePower& r) { return r.actions_bulk + r.inhomogeneity + r.couple; };
  CHECK(std::abs(volume(pw) - volume(pl) - volume(ph)) < 1e-12);
}

TEST_CASE("inner power: homogeneous closure with a rotational pair") {
  const Scenario s(motions::simple_shear(0.3),
                   MaterialModel::neo_hookean(ModulusField::constant(1.5), ModulusField::constant(0.8)),
                   DerivativeMode::Analytic, SourceMode::Closure);
  const EvaluatedPart ep(s, unit_box(8));
  const double rel = relative_power(ep, rotational_pair()).total();
  const double inner = inner_relative_power(ep, rotational_pair()).total();
  CHECK(std::abs(rel - inner) <= 1e-9 * (1 + std::abs(rel)));
  CHECK(std::abs(rel) > 1e-3);
}

TEST_CASE("inner power gap on graded closure scenarios") {
  const Scenario s(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Closure, {}, {0.05, -0.02, 0.1});
  const EvaluatedPart ep(s, unit_box(8));
  for (const VirtualFieldPair& pair : {rotational_pair(), irrotational_pair()}) {
    const double diff = relative_power(ep, pair).total() - inner_relative_power(ep, pair).total();
    CHECK(std::abs(diff - inner_power_gap(ep, pair)) < 1e-13);
  }
  CHECK(std::abs(inner_power_gap(ep, irrotational_pair())) < 1e-15);
  CHECK(std::abs(inner_power_gap(ep, rotational_pair())) > 1e-6);
}

TEST_CASE("quadrature convergence of the inner-power difference") {
  const Scenario s(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Closure);
  double previous = 1.0;
  for (int order : {2, 4, 6, 8}) {
    const EvaluatedPart ep(s, unit_box(order));
    const double err = std::abs(relative_power(ep, irrotational_pair()).total() -
                                inner_relative_power(ep, irrotational_pair()).total());
    CHECK(err <= std::max(previous, 1e-15));
    previous = err;
  }
  CHECK(previous < 1e-13);
}

TEST_CASE("integral balances vanish under the closure") {
  const Scenario s(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Closure, {}, {0.1, 0, 0}, {0, 0.1, 0});
  const EvaluatedPart ep(s, unit_box(8));
  const BalanceTerms t = balance_terms(ep);
  const double tol = 1e-8 * power_scale(ep);
  CHECK(norm(t.force()) < tol);
  CHECK(norm(t.torque()) < tol);
  CHECK(norm(t.configurational_force()) < tol);
  CHECK(norm(t.extracted_configurational_torque()) < tol);
  const IntegralBalances r = integral_balance_residuals(ep);
  CHECK(norm(r.force - t.force()) == 0.0);
  CHECK(power_scale(ep) >= 1.0);
}

TEST_CASE("invariance decomposition on closure scenarios") {
  const Scenario s(motions::rotated(wavy(), rotation_matrix({1, 1, 0}, 0.7)), graded_stvk(),
                   DerivativeMode::Analytic, SourceMode::Closure, {}, {0.1, -0.1, 0.05}, {0.2, 0, 0});
  const EvaluatedPart ep(s, unit_box(8));
  const InvarianceDecomposition d = invariance_decomposition(ep, rotational_pair());
  const double tol = 1e-8 * power_scale(ep);
  CHECK(norm(d.ambient_translation) < tol);
  CHECK(norm(d.ambient_rotation) < tol);
  CHECK(norm(d.material_translation) < tol);
  CHECK(norm(d.material_rotation) < tol);
  CHECK(d.affine_residual < 1e-10);
  CHECK(std::abs(invariance_defect(ep, rotational_pair(), {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1})) < tol);
}

TEST_CASE("invariance decomposition matches the groupings away from equilibrium") {
  PresetSources p;
  p.body_force = [](const Vector3&) { return Vector3{0.3, -0.2, 0.1}; };
  p.driving_force = [](const Vector3&) { return Vector3{0.05, 0.1, -0.02}; };
  p.couple = [](const Vector3&) { return Vector3{0.02, -0.01, 0.03}; };
  const Scenario s(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Preset, p, {0.1, 0, 0}, {0, 0.2, 0});
  const EvaluatedPart ep(s, BodyPart::box({0.2, 0.1, -0.1}, {0.5, 0.4, 0.6}, {8}));
  const InvarianceDecomposition d = invariance_decomposition(ep, rotational_pair());
  const BalanceTerms t = balance_terms(ep);
  const double tol = 1e-8 * power_scale(ep);
  CHECK(norm(d.ambient_translation - t.force()) < tol);
  CHECK(norm(d.ambient_rotation - t.torque()) < tol);
  CHECK(norm(d.material_translation - t.configurational_force()) < tol);
  CHECK(norm(d.material_rotation - t.extracted_configurational_torque()) < tol);
  CHECK(norm(t.force()) > 1e-3);
  CHECK(norm(d.material_rotation - t.configurational_torque()) > 1e-4);
}

TEST_CASE("surface independence and its preconditions") {
  const Scenario s(motions::harmonic(0.1, 0.002, 0.2), MaterialModel::quadratic(ModulusField::constant(1)),
                   DerivativeMode::Analytic, SourceMode::Preset);
  const SurfaceIndependence si = surface_independence_check(s, BodyPart::ball({}, 0.5, {8}), BodyPart::ball({}, 0.9, {8}));
  CHECK(si.difference <= 1e-6 * std::max(1.0, norm(si.outer_flux)));
  CHECK(max_abs(si.outer_flux - Vector3{0, 4 * kPi * 0.002 * 0.2, 0}) < 1e-12);

  const Scenario graded(motions::harmonic(0.1), MaterialModel::quadratic(ModulusField::affine(1, {0, 0, 0.5})),
                        DerivativeMode::Analytic, SourceMode::Preset);
  CHECK_THROWS_AS(surface_independence_check(graded, BodyPart::ball({}, 0.5), BodyPart::ball({}, 0.9)), Error);
  const Scenario closure(motions::harmonic(0.1), MaterialModel::quadratic(ModulusField::constant(1)),
                         DerivativeMode::Analytic, SourceMode::Closure);
  CHECK_THROWS_AS(surface_independence_check(closure, BodyPart::ball({}, 0.5), BodyPart::ball({}, 0.9)), Error);

  const SurfaceIndependence gd = flux_difference(graded, BodyPart::ball({}, 0.5, {8}), BodyPart::ball({}, 0.9, {8}));
  const BodyPart shell = BodyPart::shell({}, 0.5, 0.9, {8});
  const Vector3 src = volume_integral(shell, [&](const Vector3& x) {
    return graded.material().explicit_material_gradient(x, graded.motion().deformation_gradient(x));
  });
  CHECK(norm(gd.outer_flux - gd.inner_flux - src) <= 1e-5 * norm(src));
}

TEST_CASE("eshelby flux uses boundary nodes only") {
  const MaterialModel m = MaterialModel::st_venant_kirchhoff(ModulusField::constant(1), ModulusField::constant(1));
  const Scenario s(motions::homogeneous(Tensor33::diag(1.2, 1, 1)), m, DerivativeMode::Analytic, SourceMode::Preset);
  CHECK(max_abs(eshelby_flux(s, unit_box())) < 1e-14);
  CHECK(tolerance_budget(DerivativeMode::Analytic) == 1e-9);
  CHECK(tolerance_budget(DerivativeMode::FiniteDifference) == 1e-5);
}
