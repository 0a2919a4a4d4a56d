#pragma once

// Motions, virtual velocity fields and isometric observer changes.
//
// All fields are evaluated at one frozen instant. Gradients follow the
// convention G(i, j) = ∂f_i/∂x_j, so a tensor field's divergence contracts
// its second (reference) index.

#include "relpower/tensor.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>

namespace relpower {

using PointMap = std::function<Vector3(const Vector3&)>;
using GradientMap = std::function<Tensor33(const Vector3&)>;
/// D[j] = ∂G/∂x_j for a gradient field G.
using GradientDerivatives = std::array<Tensor33, 3>;
using SecondDerivativeMap = std::function<GradientDerivatives(const Vector3&)>;
using DomainPredicate = std::function<bool(const Vector3&)>;

struct FiniteDifferenceSteps {
  double first = 1e-5;   ///< step for first derivatives (length)
  double second = 1e-4;  ///< step for nested differences of gradients (length)

  static FiniteDifferenceSteps scaled(double length_scale) {
    return {1e-5 * length_scale, 1e-4 * length_scale};
  }
};

/// Placement map x ↦ y(x) with optional analytic first and second derivatives.
class Motion {
 public:
  Motion(std::string name, PointMap placement, std::optional<GradientMap> gradient = {},
         std::optional<SecondDerivativeMap> second = {}, FiniteDifferenceSteps steps = {},
         DomainPredicate domain = {});

  const std::string& name() const { return name_; }
  const FiniteDifferenceSteps& steps() const { return steps_; }
  bool has_analytic_gradient() const { return gradient_.has_value(); }
  bool has_analytic_second_derivatives() const { return second_.has_value(); }

  bool in_domain(const Vector3& x) const;

  Vector3 place(const Vector3& x) const;

  /// F = Dy. Throws NonPositiveJacobian if det F ≤ 0.
  Tensor33 deformation_gradient(const Vector3& x) const;

  /// Central-difference F regardless of analytic availability; no det check.
  Tensor33 deformation_gradient_fd(const Vector3& x) const;

  /// ∂F/∂x_j, analytic when available, otherwise central differences of F.
  GradientDerivatives gradient_derivatives(const Vector3& x) const;

  /// Same motion with analytic derivatives dropped.
  Motion finite_difference_only() const;
  Motion with_steps(FiniteDifferenceSteps steps) const;

 private:
  void require_domain(const Vector3& x) const;
  Tensor33 raw_gradient(const Vector3& x) const;

  std::string name_;
  PointMap placement_;
  std::optional<GradientMap> gradient_;
  std::optional<SecondDerivativeMap> second_;
  FiniteDifferenceSteps steps_;
  DomainPredicate domain_;
};

namespace motions {

Motion identity();
/// y = F0 x.
Motion homogeneous(const Tensor33& f0);
/// y = R (x − center) + center.
Motion rigid_rotation(const Tensor33& rotation, const Vector3& center = {});
/// y = x + γ x₂ e₁.
Motion simple_shear(double gamma);
/// y = x + α (x₁² − x₂², −2x₁x₂, 0) + γ x₁x₂ e₁ + β x/|x|³. Every displacement
/// component is harmonic; the β term is singular at the origin, which is
/// excluded from the domain when β ≠ 0.
Motion harmonic(double alpha, double source_strength = 0.0, double gamma = 0.0);
/// y = x + a sin(k·x) d.
Motion sinusoidal(double amplitude, const Vector3& wavevector, const Vector3& direction);
/// Superposed ambient rotation: y ↦ R y.
Motion rotated(const Motion& base, const Tensor33& rotation);

}  // namespace motions

/// Smooth vector field over reference space with optional analytic gradient.
class VectorField {
 public:
  VectorField(PointMap value, std::optional<GradientMap> gradient = {}, double fd_step = 1e-5);

  Vector3 operator()(const Vector3& x) const;
  Tensor33 gradient(const Vector3& x) const;
  Tensor33 gradient_fd(const Vector3& x) const;
  Vector3 curl(const Vector3& x) const;
  double divergence(const Vector3& x) const;

  bool has_analytic_gradient() const { return gradient_.has_value(); }
  double fd_step() const { return fd_step_; }
  VectorField finite_difference_only() const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator*(double s, const VectorField& a);

 private:
  PointMap value_;
  std::optional<GradientMap> gradient_;
  double fd_step_;
};

namespace fields {

VectorField zero();
VectorField constant(const Vector3& value);
/// c + q × (x − x0).
VectorField rigid(const Vector3& translation, const Vector3& rotation, const Vector3& pivot);
/// c + A x.
VectorField linear(const Tensor33& a, const Vector3& offset = {});
/// a sin(k·x) d. Irrotational when d ∥ k, isochoric when d ⟂ k.
VectorField sinusoidal(double amplitude, const Vector3& wavevector, const Vector3& direction);

}  // namespace fields

/// Virtual velocities: v over ambient space, w over material space, both
/// parametrized by the reference point.
struct VirtualFieldPair {
  VectorField v;
  VectorField w;
};

/// Generators of the two synchronous isometric observer changes.
struct ObserverChange {
  Vector3 ambient_translation;  ///< ĉ
  Vector3 ambient_rotation;     ///< q̂
  Vector3 ambient_pivot;        ///< y₀
  Vector3 material_translation; ///< c
  Vector3 material_rotation;    ///< q
  Vector3 material_pivot;       ///< x₀
};

/// v* = ĉ + q̂ × (y − y₀) + v.
Vector3 apply_ambient_change(const VirtualFieldPair& pair, const Motion& motion,
                             const ObserverChange& change, const Vector3& x);

/// w* = c + q × (x − x₀) + w.
Vector3 apply_material_change(const VirtualFieldPair& pair, const ObserverChange& change,
                              const Vector3& x);

Vector3 curl_w(const VirtualFieldPair& pair, const Vector3& x);

/// The pair (v*, w*) seen by the changed observer, with gradients
/// ∇v* = q̂× F + ∇v and ∇w* = q× + ∇w.
VirtualFieldPair changed_pair(const VirtualFieldPair& pair, const Motion& motion,
                              const ObserverChange& change);

}  // namespace relpower
