#pragma once

// Integral functionals over body parts: the relative power, its inner
// counterpart, the four integral balances, the brute-force invariance
// decomposition and the Eshelby-flux surface-independence check.

#include "relpower/configurational.hpp"
#include "relpower/field_model.hpp"
#include "relpower/quadrature.hpp"

#include <cstdint>
#include <vector>

namespace relpower {

/// Relative tolerance budget: 1e-9 with analytic derivatives, 1e-5 when
/// divergences come from finite differences.
double tolerance_budget(DerivativeMode mode);

/// Scenario fields cached at every quadrature node of a part. Volume nodes
/// carry divergences and sources; boundary nodes only the local fields.
class EvaluatedPart {
 public:
  EvaluatedPart(Scenario scenario, BodyPart part);

  const Scenario& scenario() const { return scenario_; }
  const BodyPart& part() const { return part_; }
  const std::vector<PointState>& volume_states() const { return volume_; }
  const std::vector<PointState>& surface_states() const { return surface_; }

 private:
  Scenario scenario_;
  BodyPart part_;
  std::vector<PointState> volume_;
  std::vector<PointState> surface_;
};

/// Pieces of the relative power; relative-power-of-actions plus power due to
/// disarrangements.
struct RelativePower {
  double actions_bulk = 0.0;      ///< ∫ b·(v − Fw)
  double actions_boundary = 0.0;  ///< ∫ Pn·(v − Fw)
  double energy_flux = 0.0;       ///< ∫ (n·w) e
  double inhomogeneity = 0.0;     ///< ∫ (∂ₓe − f)·(w − curl w × (x − x₀))
  double couple = 0.0;            ///< ∫ μ·curl w

  double actions() const { return actions_bulk + actions_boundary; }
  double disarrangement() const { return energy_flux + inhomogeneity + couple; }
  double total() const { return actions() + disarrangement(); }
  /// Sum of magnitudes of the pieces.
  double gross() const;
};

RelativePower relative_power(const EvaluatedPart& ep, const VirtualFieldPair& pair);

struct InnerPower {
  double standard = 0.0;  ///< ∫ P·∇v
  double eshelby = 0.0;   ///< ∫ ℙ·∇w
  double skew = 0.0;      ///< −∫ ((x − x₀) ⊗ (∂ₓe − f))·Skw∇w
  double couple = 0.0;    ///< ∫ μ·curl w

  double total() const { return standard + eshelby + skew + couple; }
};

InnerPower inner_relative_power(const EvaluatedPart& ep, const VirtualFieldPair& pair);

/// ∫ b·v + ∫ Pn·v, the power of external actions on a fixed reference place.
double standard_external_power(const EvaluatedPart& ep, const VectorField& v);

/// (2∂ₓe − f)·w bulk term plus (3/2) curl w·((∂ₓe − f) × (x − x₀)): the
/// closed-form difference between the relative power and its inner form once
/// the standard force balance holds pointwise.
double inner_power_gap(const EvaluatedPart& ep, const VirtualFieldPair& pair);

struct Pivots {
  Vector3 material;  ///< x₀
  Vector3 ambient;   ///< y₀
};

/// Every integral appearing in the integral balances and in the brute-force
/// coefficients of the invariance defect.
struct BalanceTerms {
  Vector3 body_force;             ///< ∫ b
  Vector3 traction;               ///< ∫ Pn
  Vector3 body_moment;            ///< ∫ (y − y₀) × b
  Vector3 traction_moment;        ///< ∫ (y − y₀) × Pn
  Vector3 eshelby_flux;           ///< ∫ ℙn
  Vector3 pulled_back_force;      ///< ∫ Fᵀb
  Vector3 inhomogeneity;          ///< ∫ (∂ₓe − f)
  Vector3 eshelby_moment;         ///< ∫ (x − x₀) × ℙn
  Vector3 pulled_back_moment;     ///< ∫ (x − x₀) × Fᵀb
  Vector3 couple;                 ///< ∫ μ
  Vector3 inhomogeneity_moment;   ///< ∫ (x − x₀) × (∂ₓe − f)

  Vector3 force() const { return body_force + traction; }
  Vector3 torque() const { return body_moment + traction_moment; }
  Vector3 configurational_force() const { return eshelby_flux - pulled_back_force + inhomogeneity; }
  /// ∫ (x − x₀) × ℙn − ∫ (x − x₀) × Fᵀb + ∫ μ.
  Vector3 configurational_torque() const { return eshelby_moment - pulled_back_moment + couple; }
  /// Material-rotation coefficient of the invariance defect in closed form:
  /// configurational_torque() − ∫ (x − x₀) × (∂ₓe − f) + ∫ μ.
  Vector3 extracted_configurational_torque() const {
    return configurational_torque() - inhomogeneity_moment + couple;
  }
};

BalanceTerms balance_terms(const EvaluatedPart& ep, const Pivots& pivots);
BalanceTerms balance_terms(const EvaluatedPart& ep);

struct IntegralBalances {
  Vector3 force;
  Vector3 torque;
  Vector3 configurational_force;
  Vector3 configurational_torque;
};

IntegralBalances integral_balance_residuals(const EvaluatedPart& ep, const Pivots& pivots);
IntegralBalances integral_balance_residuals(const EvaluatedPart& ep);

/// 𝒫^rel(v*, w*) − 𝒫^rel(v, w) for the given generators (pivots taken from the
/// scenario).
double invariance_defect(const EvaluatedPart& ep, const VirtualFieldPair& pair,
                         const Vector3& ambient_translation, const Vector3& ambient_rotation,
                         const Vector3& material_translation, const Vector3& material_rotation);

struct InvarianceOptions {
  int probes = 4;              ///< random generator combinations for the affine check
  std::uint64_t seed = 12345;
  double affine_tolerance = 1e-10;
};

struct InvarianceDecomposition {
  Vector3 ambient_translation;   ///< ĉ-coefficient
  Vector3 ambient_rotation;      ///< q̂-coefficient
  Vector3 material_translation;  ///< c-coefficient
  Vector3 material_rotation;     ///< q-coefficient
  double affine_residual = 0.0;  ///< worst relative misfit of the random probes
  double base_power = 0.0;       ///< 𝒫^rel(v, w)
};

/// Extracts the four coefficient vectors from 12 unit-generator evaluations
/// and checks the defect is affine on random probes. Throws NonAffineDefect
/// when the probe misfit exceeds options.affine_tolerance.
InvarianceDecomposition invariance_decomposition(const EvaluatedPart& ep,
                                                 const VirtualFieldPair& pair,
                                                 const InvarianceOptions& options = {});

/// Natural magnitude of the balance integrals, used to make coefficient
/// tolerances relative. Never below 1.
double power_scale(const EvaluatedPart& ep);

/// ∫_∂𝔟 ℙn, evaluated on boundary nodes only.
Vector3 eshelby_flux(const Scenario& scenario, const BodyPart& part);

struct SurfaceIndependence {
  Vector3 inner_flux;
  Vector3 outer_flux;
  double difference = 0.0;  ///< ‖outer − inner‖
};

/// Flux difference between two nested closed surfaces, without hypothesis checks.
SurfaceIndependence flux_difference(const Scenario& scenario, const BodyPart& inner,
                                    const BodyPart& outer);

/// As flux_difference, after checking homogeneity, vanishing b, f, μ and
/// pointwise equilibrium on both surfaces. Throws PreconditionViolated.
SurfaceIndependence surface_independence_check(const Scenario& scenario, const BodyPart& inner,
                                               const BodyPart& outer);

}  // namespace relpower
