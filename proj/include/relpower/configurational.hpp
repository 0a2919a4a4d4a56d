#pragma once

// Eshelby stress, pointwise standard and configurational balances, manufactured
// closure sources and the Noether flux.
//
// Sign conventions: Div T contracts the second (reference) index; Fᵀ is used
// for F* since every space carries the Euclidean metric.

#include "relpower/field_model.hpp"
#include "relpower/material.hpp"
#include "relpower/tensor.hpp"

#include <optional>
#include <utility>

namespace relpower {

enum class DerivativeMode { Analytic, FiniteDifference };

enum class SourceMode {
  /// b, f, μ manufactured so that every pointwise balance holds identically.
  Closure,
  /// b, f, μ prescribed (b possibly from a potential u).
  Preset,
};

struct PresetSources {
  PointMap body_force = [](const Vector3&) { return Vector3{}; };
  PointMap driving_force = [](const Vector3&) { return Vector3{}; };
  PointMap couple = [](const Vector3&) { return Vector3{}; };
  /// When set, b = −∂_y u(y(x)) replaces body_force.
  std::optional<BodyPotential> potential;
};

/// Motion, material, sources and pivots fixed for one verification instant.
class Scenario {
 public:
  /// Analytic mode requires analytic second derivatives of the motion; in
  /// finite-difference mode every derivative of the motion is differenced.
  Scenario(Motion motion, MaterialModel material, DerivativeMode mode, SourceMode sources,
           PresetSources preset = {}, Vector3 material_pivot = {}, Vector3 ambient_pivot = {});

  /// Analytic when the motion supports it, finite differences otherwise.
  static DerivativeMode preferred_mode(const Motion& motion);

  const Motion& motion() const { return motion_; }
  const MaterialModel& material() const { return material_; }
  DerivativeMode mode() const { return mode_; }
  SourceMode source_mode() const { return source_mode_; }
  const PresetSources& preset() const { return preset_; }
  const Vector3& material_pivot() const { return material_pivot_; }  ///< x₀
  const Vector3& ambient_pivot() const { return ambient_pivot_; }    ///< y₀

  /// u(y(x)); zero unless a potential is configured.
  double body_potential(const Vector3& y) const;

 private:
  Motion motion_;
  MaterialModel material_;
  DerivativeMode mode_;
  SourceMode source_mode_;
  PresetSources preset_;
  Vector3 material_pivot_;
  Vector3 ambient_pivot_;
};

/// Every field the functionals need at one reference point.
struct PointState {
  Vector3 x;
  Vector3 y;
  Tensor33 deformation_gradient;  ///< F
  double energy = 0.0;            ///< e
  Tensor33 stress;                ///< P = ∂_F e
  Tensor33 eshelby;               ///< ℙ = eI − FᵀP
  Vector3 explicit_gradient;      ///< ∂ₓe
  Vector3 stress_divergence;      ///< Div P
  Vector3 eshelby_divergence;     ///< Div ℙ
  Vector3 body_force;             ///< b
  Vector3 driving_force;          ///< f
  Vector3 couple;                 ///< μ
  double potential = 0.0;         ///< u
};

PointState evaluate_point(const Scenario& scenario, const Vector3& x);

/// Pointwise fields without the divergence-dependent quantities (Div P, Div ℙ,
/// closure sources). Cheap enough for boundary nodes.
PointState evaluate_point_local(const Scenario& scenario, const Vector3& x);

Tensor33 eshelby_stress(const MaterialModel& model, const Motion& motion, const Vector3& x);

/// Div P + b.
Vector3 standard_force_residual(const Scenario& scenario, const Vector3& x);

/// Div ℙ − Fᵀb + ∂ₓe − f.
Vector3 configurational_force_residual(const Scenario& scenario, const Vector3& x);

struct TorqueResiduals {
  /// axial(2 Skw(P Fᵀ)).
  Vector3 ambient;
  /// axial(Skw ℙ) + μ − (x − x₀) × (∂ₓe − f): the pointwise statement whose
  /// vanishing makes the material-rotation part of the relative power invariant.
  Vector3 configurational;
  /// axial(2 Skw ℙ) − μ, the textbook form of the couple balance.
  Vector3 textbook;
};

TorqueResiduals torque_residuals(const Scenario& scenario, const Vector3& x);

/// Div ℙ + Fᵀ Div P − ∂ₓe, which vanishes for any smooth motion.
Vector3 eshelby_divergence_identity(const Scenario& scenario, const Vector3& x);

struct ClosureFields {
  PointMap body_force;     ///< b := −Div P
  PointMap driving_force;  ///< f := Div ℙ − Fᵀb + ∂ₓe
  PointMap couple;         ///< μ := (x − x₀) × (∂ₓe − f) − axial(Skw ℙ)
};

ClosureFields closure_fields(const Scenario& scenario);

/// 𝔉 = (e + u) w + Pᵀ (v − F w).
Vector3 noether_flux(const Scenario& scenario, const VirtualFieldPair& pair, const Vector3& x);

/// (∂_y u · v + P · ∇v,  ∂ₓe · w − P · F∇w).
std::pair<double, double> noether_condition_residuals(const Scenario& scenario,
                                                      const VirtualFieldPair& pair,
                                                      const Vector3& x);

/// Div 𝔉 by central differences with step h.
double noether_flux_divergence(const Scenario& scenario, const VirtualFieldPair& pair,
                               const Vector3& x, double h);

}  // namespace relpower
