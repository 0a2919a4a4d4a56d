#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relpower/error.hpp"
#include "relpower/material.hpp"
#include "support.hpp"

#include <vector>

using namespace relpower;
using testing::max_abs;
using testing::random_gradient;
using testing::random_vector;

namespace {

std::vector<MaterialModel> graded_models() {
  const ModulusField lam = ModulusField::sinusoidal(1.0, 0.2, {1, 0.5, -1});
  const ModulusField mu = ModulusField::affine(0.8, {0.1, -0.2, 0.15});
  return {MaterialModel::st_venant_kirchhoff(lam, mu), MaterialModel::neo_hookean(lam, mu),
          MaterialModel::quadratic(mu)};
}

Tensor33 stress_fd(const MaterialModel& m, const Vector3& x, const Tensor33& f) {
  const double h = 1e-5;
  Tensor33 p;
  for (std::size_t i = 0; i < 9; ++i) {
    Tensor33 a = f, b = f;
    a.c[i] += h;
    b.c[i] -= h;
    p.c[i] = (m.energy(x, a) - m.energy(x, b)) / (2 * h);
  }
  return p;
}

const Tensor33 kStretch = Tensor33::diag(1.2, 1, 1);

}  // namespace

TEST_CASE("St.VK uniaxial stretch oracle") {
  const MaterialModel m = MaterialModel::st_venant_kirchhoff(ModulusField::constant(1), ModulusField::constant(1));
  CHECK(m.energy({}, Tensor33::identity()) == 0.0);
  CHECK(m.energy({}, kStretch) == doctest::Approx(0.0726).epsilon(1e-14));
  CHECK(max_abs(m.first_pk_stress({}, kStretch) - Tensor33::diag(0.792, 0.22, 0.22)) < 1e-14);
  CHECK(max_abs(m.cauchy_stress({}, kStretch) - Tensor33::diag(0.792, 0.22 / 1.2, 0.22 / 1.2)) < 1e-14);
  CHECK(max_abs(m.first_pk_stress({}, Tensor33::identity())) == 0.0);
}

TEST_CASE("graded St.VK explicit gradient oracle") {
  for (double beta : {0.0, 0.5, -1.3}) {
    const MaterialModel m =
        MaterialModel::st_venant_kirchhoff(ModulusField::constant(1), ModulusField::affine(1, {beta, 0, 0}));
    const Vector3 g = m.explicit_material_gradient({0.2, 0.1, -0.3}, kStretch);
    CHECK(max_abs(g - Vector3{0.0484 * beta, 0, 0}) < 1e-15);
  }
}

TEST_CASE("Neo-Hookean and quadratic examples") {
  const MaterialModel nh = MaterialModel::neo_hookean(ModulusField::constant(1.5), ModulusField::constant(0.8));
  CHECK(std::abs(nh.energy({}, testing::random_rotation())) < 1e-14);
  CHECK(max_abs(nh.first_pk_stress({}, Tensor33::identity())) < 1e-15);
  const MaterialModel q = MaterialModel::quadratic(ModulusField::constant(0.7));
  for (int k = 0; k < 10; ++k) {
    const Tensor33 f = random_gradient();
    CHECK(max_abs(q.first_pk_stress({}, f) - 0.7 * (f - Tensor33::identity())) < 1e-15);
  }
  CHECK(q.name() == "quadratic");
  CHECK(nh.name() == "neo-hookean");
  CHECK_FALSE(q.flags().frame_indifferent);
  CHECK_FALSE(q.flags().isotropic);
  CHECK(nh.flags().frame_indifferent);
  CHECK(nh.flags().homogeneous);
}

TEST_CASE("analytic derivatives against central differences") {
  for (const MaterialModel& m : graded_models()) {
    CAPTURE(m.name());
    for (int k = 0; k < 100; ++k) {
      const Vector3 x = random_vector();
      const Tensor33 f = random_gradient();
      const Tensor33 p = m.first_pk_stress(x, f);
      CHECK(frobenius_norm(p - stress_fd(m, x, f)) <= 1e-6 * frobenius_norm(p));

      const double h = 1e-5;
      Vector3 g_fd;
      for (std::size_t i = 0; i < 3; ++i) {
        const Vector3 dx = h * Vector3::unit(i);
        g_fd[i] = (m.energy(x + dx, f) - m.energy(x - dx, f)) / (2 * h);
      }
      const Vector3 g = m.explicit_material_gradient(x, f);
      CHECK(norm(g - g_fd) <= 1e-6 * norm(g));

      const ElasticityTensor a = m.tangent(x, f);
      const Tensor33 df = testing::random_tensor();
      const Tensor33 dp = (1 / (2 * h)) * (m.first_pk_stress(x, f + h * df) - m.first_pk_stress(x, f - h * df));
      CHECK(frobenius_norm(a.contract(df) - dp) <= 1e-6 * frobenius_norm(dp));

      const auto ds = m.explicit_stress_gradient(x, f);
      for (std::size_t i = 0; i < 3; ++i) {
        const Vector3 dx = h * Vector3::unit(i);
        const Tensor33 d_fd = (1 / (2 * h)) * (m.first_pk_stress(x + dx, f) - m.first_pk_stress(x - dx, f));
        CHECK(max_abs(ds[i] - d_fd) <= 1e-6 * std::max(1.0, max_abs(ds[i])));
      }
    }
  }
}

TEST_CASE("frame indifference of the physical models") {
  for (const MaterialModel& m : graded_models()) {
    if (!m.flags().frame_indifferent) continue;
    for (int k = 0; k < 50; ++k) {
      const Vector3 x = random_vector();
      const Tensor33 f = random_gradient();
      const double e = m.energy(x, f);
      CHECK(std::abs(m.energy(x, testing::random_rotation() * f) - e) <= 1e-10 * std::abs(e));
    }
  }
}

TEST_CASE("homogeneous models have no explicit gradient") {
  const MaterialModel m = MaterialModel::neo_hookean(ModulusField::constant(2), ModulusField::constant(1));
  CHECK(m.flags().homogeneous);
  CHECK(max_abs(m.explicit_material_gradient(random_vector(), random_gradient())) == 0.0);
  CHECK_FALSE(graded_models()[0].flags().homogeneous);
  CHECK(ModulusField::sinusoidal(1, 0, {1, 0, 0}).homogeneous());
}

TEST_CASE("non-positive Jacobian") {
  for (const MaterialModel& m : graded_models()) {
    try {
      m.first_pk_stress({}, Tensor33::diag(1, -1, 1));
      FAIL("expected NonPositiveJacobian");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveJacobian);
    }
    CHECK_THROWS_AS(m.energy({}, Tensor33::diag(1, 0, 1)), Error);
  }
}

TEST_CASE("body potentials") {
  const BodyPotential spring = BodyPotential::spring(0.5, {0.1, 0, -0.1});
  const BodyPotential uniform = BodyPotential::uniform({0, 0, -9.81});
  CHECK(max_abs(uniform.body_force({1, 2, 3}) - Vector3{0, 0, -9.81}) == 0.0);
  CHECK(BodyPotential::zero().potential({1, 2, 3}) == 0.0);
  for (int k = 0; k < 20; ++k) {
    const Vector3 y = random_vector();
    const double h = 1e-5;
    for (const BodyPotential& u : {spring, uniform}) {
      Vector3 b_fd;
      for (std::size_t i = 0; i < 3; ++i) {
        const Vector3 dy = h * Vector3::unit(i);
        b_fd[i] = -(u.potential(y + dy) - u.potential(y - dy)) / (2 * h);
      }
      CHECK(norm(u.body_force(y) - b_fd) <= 1e-6 * std::max(1e-12, norm(u.body_force(y))));
    }
  }
}
