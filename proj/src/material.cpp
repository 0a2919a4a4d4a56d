#include "relpower/material.hpp"

#include "relpower/error.hpp"

#include <sstream>

namespace relpower {

namespace {

double delta(std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; }

double checked_jacobian(const Tensor33& f) {
  const double j = determinant(f);
  if (!(j > 0.0)) {
    std::ostringstream os;
    os << "det F = " << j << " for F = " << f;
    throw Error(ErrorCode::NonPositiveJacobian, os.str());
  }
  return j;
}

}  // namespace

Tensor33 ElasticityTensor::contract(const Tensor33& df) const {
  Tensor33 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) s += (*this)(i, j, k, l) * df(k, l);
      r(i, j) = s;
    }
  return r;
}

// ---------------------------------------------------------------------------
// ModulusField

ModulusField ModulusField::constant(double value) { return {Kind::Constant, value, {}, 0.0}; }

ModulusField ModulusField::affine(double base, const Vector3& gradient) {
  return {Kind::Affine, base, gradient, 0.0};
}

ModulusField ModulusField::sinusoidal(double base, double amplitude, const Vector3& wavevector) {
  return {Kind::Sinusoidal, base, wavevector, amplitude};
}

double ModulusField::value(const Vector3& x) const {
  switch (kind_) {
    case Kind::Constant: return base_;
    case Kind::Affine: return base_ + dot(vector_, x);
    case Kind::Sinusoidal: return base_ + amplitude_ * std::sin(dot(vector_, x));
  }
  return base_;
}

Vector3 ModulusField::gradient(const Vector3& x) const {
  switch (kind_) {
    case Kind::Constant: return {};
    case Kind::Affine: return vector_;
    case Kind::Sinusoidal: return (amplitude_ * std::cos(dot(vector_, x))) * vector_;
  }
  return {};
}

bool ModulusField::homogeneous() const {
  switch (kind_) {
    case Kind::Constant: return true;
    case Kind::Affine: return vector_ == Vector3{};
    case Kind::Sinusoidal: return amplitude_ == 0.0 || vector_ == Vector3{};
  }
  return true;
}

// ---------------------------------------------------------------------------
// MaterialModel

MaterialModel::MaterialModel(EnergyKind kind, ModulusField lambda, ModulusField mu)
    : kind_(kind), lambda_(lambda), mu_(mu) {}

MaterialModel MaterialModel::st_venant_kirchhoff(ModulusField lambda, ModulusField mu) {
  return {EnergyKind::StVenantKirchhoff, lambda, mu};
}

MaterialModel MaterialModel::neo_hookean(ModulusField lambda, ModulusField mu) {
  return {EnergyKind::NeoHookean, lambda, mu};
}

MaterialModel MaterialModel::quadratic(ModulusField mu) {
  return {EnergyKind::Quadratic, ModulusField::constant(0.0), mu};
}

std::string MaterialModel::name() const {
  switch (kind_) {
    case EnergyKind::StVenantKirchhoff: return "stvk";
    case EnergyKind::NeoHookean: return "neo-hookean";
    case EnergyKind::Quadratic: return "quadratic";
  }
  return "unknown";
}

MaterialFlags MaterialModel::flags() const {
  const bool physical = kind_ != EnergyKind::Quadratic;
  return {physical, physical, lambda_.homogeneous() && mu_.homogeneous()};
}

MaterialModel::Basis MaterialModel::basis(const Tensor33& f) const {
  const double j = checked_jacobian(f);
  Basis b;
  switch (kind_) {
    case EnergyKind::StVenantKirchhoff: {
      const Tensor33 e = 0.5 * (transpose(f) * f - Tensor33::identity());
      const double tr = trace(e);
      b.lambda_energy = 0.5 * tr * tr;
      b.mu_energy = double_contraction(e, e);
      b.lambda_stress = tr * f;
      b.mu_stress = 2.0 * (f * e);
      break;
    }
    case EnergyKind::NeoHookean: {
      const double log_j = std::log(j);
      const Tensor33 f_inv_t = transpose(inverse(f));
      b.lambda_energy = 0.5 * log_j * log_j;
      b.mu_energy = 0.5 * (double_contraction(f, f) - 3.0) - log_j;
      b.lambda_stress = log_j * f_inv_t;
      b.mu_stress = f - f_inv_t;
      break;
    }
    case EnergyKind::Quadratic: {
      const Tensor33 d = f - Tensor33::identity();
      b.mu_energy = 0.5 * double_contraction(d, d);
      b.mu_stress = d;
      break;
    }
  }
  return b;
}

double MaterialModel::energy(const Vector3& x, const Tensor33& f) const {
  const Basis b = basis(f);
  return lambda_.value(x) * b.lambda_energy + mu_.value(x) * b.mu_energy;
}

Tensor33 MaterialModel::first_pk_stress(const Vector3& x, const Tensor33& f) const {
  const Basis b = basis(f);
  return lambda_.value(x) * b.lambda_stress + mu_.value(x) * b.mu_stress;
}

Vector3 MaterialModel::explicit_material_gradient(const Vector3& x, const Tensor33& f) const {
  const Basis b = basis(f);
  return b.lambda_energy * lambda_.gradient(x) + b.mu_energy * mu_.gradient(x);
}

Tensor33 MaterialModel::cauchy_stress(const Vector3& x, const Tensor33& f) const {
  const double j = checked_jacobian(f);
  return (1.0 / j) * (first_pk_stress(x, f) * transpose(f));
}

std::array<Tensor33, 3> MaterialModel::explicit_stress_gradient(const Vector3& x,
                                                                const Tensor33& f) const {
  const Basis b = basis(f);
  const Vector3 gl = lambda_.gradient(x);
  const Vector3 gm = mu_.gradient(x);
  std::array<Tensor33, 3> d;
  for (std::size_t k = 0; k < 3; ++k) d[k] = gl[k] * b.lambda_stress + gm[k] * b.mu_stress;
  return d;
}

ElasticityTensor MaterialModel::tangent(const Vector3& x, const Tensor33& f) const {
  const double j = checked_jacobian(f);
  const double lam = lambda_.value(x);
  const double mu = mu_.value(x);
  ElasticityTensor a;
  switch (kind_) {
    case EnergyKind::StVenantKirchhoff: {
      // P = F S with S = λ tr(E) I + 2μ E.
      const Tensor33 e = 0.5 * (transpose(f) * f - Tensor33::identity());
      const Tensor33 ffT = f * transpose(f);
      const double tr = trace(e);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t jj = 0; jj < 3; ++jj)
          for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t l = 0; l < 3; ++l) {
              const double lambda_part = f(k, l) * f(i, jj) + tr * delta(i, k) * delta(jj, l);
              const double mu_part = 2.0 * delta(i, k) * e(l, jj) + f(i, l) * f(k, jj) +
                                     ffT(i, k) * delta(jj, l);
              a(i, jj, k, l) = lam * lambda_part + mu * mu_part;
            }
      break;
    }
    case EnergyKind::NeoHookean: {
      const Tensor33 fi = inverse(f);
      const double log_j = std::log(j);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t jj = 0; jj < 3; ++jj)
          for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t l = 0; l < 3; ++l) {
              // ∂(F⁻ᵀ)_ij/∂F_kl = −F⁻¹_li F⁻¹_jk
              const double d_inv_t = -fi(l, i) * fi(jj, k);
              const double lambda_part = fi(jj, i) * fi(l, k) + log_j * d_inv_t;
              const double mu_part = delta(i, k) * delta(jj, l) - d_inv_t;
              a(i, jj, k, l) = lam * lambda_part + mu * mu_part;
            }
      break;
    }
    case EnergyKind::Quadratic: {
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t jj = 0; jj < 3; ++jj) a(i, jj, i, jj) = mu;
      break;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// BodyPotential

BodyPotential BodyPotential::zero() { return {Kind::Zero, {}, 0.0}; }

BodyPotential BodyPotential::uniform(const Vector3& force) { return {Kind::Uniform, force, 0.0}; }

BodyPotential BodyPotential::spring(double stiffness, const Vector3& anchor) {
  return {Kind::Spring, anchor, stiffness};
}

double BodyPotential::potential(const Vector3& y) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Uniform: return -dot(vector_, y);
    case Kind::Spring: {
      const Vector3 d = y - vector_;
      return 0.5 * scalar_ * dot(d, d);
    }
  }
  return 0.0;
}

Vector3 BodyPotential::gradient(const Vector3& y) const {
  switch (kind_) {
    case Kind::Zero: return {};
    case Kind::Uniform: return -vector_;
    case Kind::Spring: return scalar_ * (y - vector_);
  }
  return {};
}

}  // namespace relpower
