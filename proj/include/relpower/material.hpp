#pragma once

// Elastic free energies e(x, F) whose state is the pair (x, F).
//
// Every shipped energy is linear in the two moduli, e = λ(x) φ_λ(F) + μ(x) φ_μ(F),
// so inhomogeneity enters only through the modulus fields and the explicit
// gradient ∂ₓe is ∇λ φ_λ + ∇μ φ_μ.

#include "relpower/tensor.hpp"

#include <array>
#include <string>

namespace relpower {

/// Fourth-order tensor A(i, j, k, l) = ∂P_ij/∂F_kl.
struct ElasticityTensor {
  std::array<double, 81> c{};

  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return c[((i * 3 + j) * 3 + k) * 3 + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return c[((i * 3 + j) * 3 + k) * 3 + l];
  }

  /// (A : dF)_ij = Σ_kl A_ijkl dF_kl.
  Tensor33 contract(const Tensor33& df) const;
};

/// Scalar modulus field: constant, affine base + g·x, or base + a sin(k·x).
class ModulusField {
 public:
  enum class Kind { Constant, Affine, Sinusoidal };

  static ModulusField constant(double value);
  static ModulusField affine(double base, const Vector3& gradient);
  static ModulusField sinusoidal(double base, double amplitude, const Vector3& wavevector);

  double value(const Vector3& x) const;
  Vector3 gradient(const Vector3& x) const;
  bool homogeneous() const;

  Kind kind() const { return kind_; }
  double base() const { return base_; }
  const Vector3& slope() const { return vector_; }
  double amplitude() const { return amplitude_; }

 private:
  ModulusField(Kind kind, double base, const Vector3& vector, double amplitude)
      : kind_(kind), base_(base), vector_(vector), amplitude_(amplitude) {}

  Kind kind_;
  double base_;
  Vector3 vector_;  // gradient (affine) or wavevector (sinusoidal)
  double amplitude_;
};

enum class EnergyKind { StVenantKirchhoff, NeoHookean, Quadratic };

struct MaterialFlags {
  bool frame_indifferent = false;
  bool isotropic = false;
  bool homogeneous = false;
};

class MaterialModel {
 public:
  MaterialModel(EnergyKind kind, ModulusField lambda, ModulusField mu);

  /// e = (λ/2)(tr E)² + μ tr(E²), E = (FᵀF − I)/2.
  static MaterialModel st_venant_kirchhoff(ModulusField lambda, ModulusField mu);
  /// e = (μ/2)(tr(FᵀF) − 3) − μ ln J + (λ/2)(ln J)².
  static MaterialModel neo_hookean(ModulusField lambda, ModulusField mu);
  /// e = (μ/2)|F − I|². Neither frame-indifferent nor isotropic.
  static MaterialModel quadratic(ModulusField mu);

  EnergyKind kind() const { return kind_; }
  std::string name() const;
  MaterialFlags flags() const;
  const ModulusField& lambda() const { return lambda_; }
  const ModulusField& mu() const { return mu_; }

  // All evaluations throw NonPositiveJacobian when det F ≤ 0.
  double energy(const Vector3& x, const Tensor33& f) const;
  Tensor33 first_pk_stress(const Vector3& x, const Tensor33& f) const;
  /// ∂ₓe at fixed F.
  Vector3 explicit_material_gradient(const Vector3& x, const Tensor33& f) const;
  /// σ = J⁻¹ P Fᵀ.
  Tensor33 cauchy_stress(const Vector3& x, const Tensor33& f) const;
  ElasticityTensor tangent(const Vector3& x, const Tensor33& f) const;
  /// D[k] = ∂P/∂x_k at fixed F.
  std::array<Tensor33, 3> explicit_stress_gradient(const Vector3& x, const Tensor33& f) const;

 private:
  struct Basis {
    double lambda_energy = 0.0;
    double mu_energy = 0.0;
    Tensor33 lambda_stress;
    Tensor33 mu_stress;
  };
  Basis basis(const Tensor33& f) const;

  EnergyKind kind_;
  ModulusField lambda_;
  ModulusField mu_;
};

/// Body-force potential u(y); the body force is b = −∂_y u.
class BodyPotential {
 public:
  enum class Kind { Zero, Uniform, Spring };

  static BodyPotential zero();
  /// u = −g·y, so b = g.
  static BodyPotential uniform(const Vector3& force);
  /// u = (κ/2)|y − y_c|².
  static BodyPotential spring(double stiffness, const Vector3& anchor);

  double potential(const Vector3& y) const;
  Vector3 gradient(const Vector3& y) const;
  Vector3 body_force(const Vector3& y) const { return -gradient(y); }
  Kind kind() const { return kind_; }

 private:
  BodyPotential(Kind kind, const Vector3& vector, double scalar)
      : kind_(kind), vector_(vector), scalar_(scalar) {}

  Kind kind_;
  Vector3 vector_;
  double scalar_;
};

}  // namespace relpower
