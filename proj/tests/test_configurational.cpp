#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relpower/configurational.hpp"
#include "relpower/error.hpp"
#include "support.hpp"

using namespace relpower;
using testing::max_abs;
using testing::random_vector;

namespace {

MaterialModel graded_stvk() {
  return MaterialModel::st_venant_kirchhoff(ModulusField::affine(1.2, {0.2, -0.1, 0.3}),
                                            ModulusField::sinusoidal(0.8, 0.1, {1, -1, 0.5}));
}

Motion wavy() { return motions::sinusoidal(0.05, {1.5, -1, 2}, {0.3, 1, -0.5}); }

}  // namespace

TEST_CASE("Eshelby fixture for the St.VK stretch") {
  const MaterialModel m = MaterialModel::st_venant_kirchhoff(ModulusField::constant(1), ModulusField::constant(1));
  const Tensor33 es = eshelby_stress(m, motions::homogeneous(Tensor33::diag(1.2, 1, 1)), {});
  CHECK(max_abs(es - Tensor33::diag(-0.8778, -0.1474, -0.1474)) < 1e-9);
  CHECK(max_abs(eshelby_stress(m, motions::identity(), {0.1, 0.2, 0.3})) == 0.0);
}

TEST_CASE("closure sources satisfy every pointwise balance") {
  for (DerivativeMode mode : {DerivativeMode::Analytic, DerivativeMode::FiniteDifference}) {
    const Scenario s(wavy(), graded_stvk(), mode, SourceMode::Closure, {}, {0.1, 0, 0});
    for (int k = 0; k < 20; ++k) {
      const Vector3 x = random_vector(0.5);
      const PointState st = evaluate_point(s, x);
      CHECK(max_abs(standard_force_residual(s, x)) < 1e-14);
      CHECK(max_abs(configurational_force_residual(s, x)) < 1e-14);
      CHECK(max_abs(torque_residuals(s, x).configurational) < 1e-14);
      CHECK(max_abs(torque_residuals(s, x).ambient) < 1e-12);
      // Divℙ − Fᵀb + ∂ₓe with b = −DivP equals 2∂ₓe.
      CHECK(max_abs(st.driving_force - 2.0 * st.explicit_gradient) < (mode == DerivativeMode::Analytic ? 1e-12 : 1e-6));
      const ClosureFields cf = closure_fields(s);
      CHECK(max_abs(cf.body_force(x) - st.body_force) == 0.0);
      CHECK(max_abs(cf.couple(x) - st.couple) == 0.0);
    }
  }
}

TEST_CASE("Eshelby divergence identity") {
  const Scenario graded(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Closure);
  const Scenario nh(motions::harmonic(0.1, 0, 0.2),
                    MaterialModel::neo_hookean(ModulusField::constant(1.5), ModulusField::constant(0.8)),
                    DerivativeMode::Analytic, SourceMode::Preset);
  const Scenario fd(wavy(), graded_stvk(), DerivativeMode::FiniteDifference, SourceMode::Preset);
  for (int k = 0; k < 20; ++k) {
    const Vector3 x = random_vector(0.5);
    CHECK(max_abs(eshelby_divergence_identity(graded, x)) < 1e-12);
    CHECK(max_abs(eshelby_divergence_identity(nh, x)) < 1e-12);
    CHECK(max_abs(eshelby_divergence_identity(fd, x)) < 1e-6);
  }
}

TEST_CASE("analytic and FD divergences agree on random points") {
  const Scenario a(wavy(), graded_stvk(), DerivativeMode::Analytic, SourceMode::Preset);
  const Scenario f(wavy(), graded_stvk(), DerivativeMode::FiniteDifference, SourceMode::Preset);
  for (int k = 0; k < 100; ++k) {
    const Vector3 x = random_vector(0.5);
    const PointState sa = evaluate_point(a, x), sf = evaluate_point(f, x);
    CHECK(max_abs(sa.stress_divergence - sf.stress_divergence) < 1e-6);
    CHECK(max_abs(sa.eshelby_divergence - sf.eshelby_divergence) < 1e-6);
  }
}

TEST_CASE("quadratic shear: ambient torque residual") {
  const double mu = 0.7, gamma = 0.4;
  const Scenario s(motions::simple_shear(gamma), MaterialModel::quadratic(ModulusField::constant(mu)),
                   DerivativeMode::Analytic, SourceMode::Preset);
  CHECK(max_abs(torque_residuals(s, {0.3, 0.2, -0.1}).ambient - Vector3{0, 0, -mu * gamma}) < 1e-15);
}

TEST_CASE("graded quadratic homogeneous stretch: configurational force residual") {
  const Tensor33 f0{1.1, 0.2, 0, -0.1, 0.95, 0.05, 0, 0.1, 1.05};
  const Vector3 g{0.3, -0.2, 0.1};
  const Scenario s(motions::homogeneous(f0), MaterialModel::quadratic(ModulusField::affine(1, g)),
                   DerivativeMode::Analytic, SourceMode::Preset);
  const Tensor33 h = f0 - Tensor33::identity();
  const double half_sq = 0.5 * double_contraction(h, h);
  const Tensor33 m = half_sq * Tensor33::identity() - transpose(f0) * h;
  const Vector3 expected = m * g + half_sq * g;
  CHECK(max_abs(configurational_force_residual(s, {0.2, -0.3, 0.4}) - expected) < 1e-14);
}

TEST_CASE("preset sources and potentials") {
  PresetSources p;
  p.potential = BodyPotential::uniform({0, 0, -2});
  p.driving_force = [](const Vector3&) { return Vector3{0.1, 0, 0}; };
  const Scenario s(motions::identity(), MaterialModel::quadratic(ModulusField::constant(1)),
                   DerivativeMode::Analytic, SourceMode::Preset, p);
  const PointState st = evaluate_point(s, {0.1, 0.2, 0.3});
  CHECK(max_abs(st.body_force - Vector3{0, 0, -2}) == 0.0);
  CHECK(max_abs(standard_force_residual(s, {}) - Vector3{0, 0, -2}) < 1e-15);
  CHECK(max_abs(st.driving_force - Vector3{0.1, 0, 0}) == 0.0);
  CHECK(s.body_potential({0, 0, 1}) == doctest::Approx(2.0));
}

TEST_CASE("analytic mode needs second derivatives") {
  const Motion no_hessian("custom", [](const Vector3& x) { return x; });
  CHECK_THROWS_AS(Scenario(no_hessian, graded_stvk(), DerivativeMode::Analytic, SourceMode::Closure), Error);
  CHECK(Scenario::preferred_mode(no_hessian) == DerivativeMode::FiniteDifference);
  CHECK(Scenario::preferred_mode(wavy()) == DerivativeMode::Analytic);
}

TEST_CASE("Noether conditions and flux") {
  const Scenario s(motions::harmonic(0.1, 0, 0.2), MaterialModel::quadratic(ModulusField::constant(1)),
                   DerivativeMode::Analytic, SourceMode::Preset);
  const VirtualFieldPair pair{fields::constant({0.2, -0.1, 0.3}), fields::constant({0.1, 0.3, -0.2})};
  for (int k = 0; k < 20; ++k) {
    const Vector3 x = random_vector(0.5);
    const auto [c1, c2] = noether_condition_residuals(s, pair, x);
    CHECK(std::abs(c1) < 1e-12);
    CHECK(std::abs(c2) < 1e-12);
    CHECK(std::abs(noether_flux_divergence(s, pair, x, 1e-4)) < 1e-6);
  }
  const Scenario graded(motions::harmonic(0.1, 0, 0.2), MaterialModel::quadratic(ModulusField::affine(1, {0.3, 0, 0})),
                        DerivativeMode::Analytic, SourceMode::Preset);
  const Vector3 x{0.1, 0.2, 0.3};
  const auto [c1, c2] = noether_condition_residuals(graded, pair, x);
  (void)c1;
  const double ep = dot(graded.material().explicit_material_gradient(x, graded.motion().deformation_gradient(x)),
                        pair.w(x));
  CHECK(std::abs(c2 - ep) < 1e-12);
  CHECK(std::abs(ep) > 1e-6);
}
