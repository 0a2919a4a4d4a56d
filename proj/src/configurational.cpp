#include "relpower/configurational.hpp"

#include "relpower/error.hpp"

#include <utility>

namespace relpower {

Scenario::Scenario(Motion motion, MaterialModel material, DerivativeMode mode, SourceMode sources,
                   PresetSources preset, Vector3 material_pivot, Vector3 ambient_pivot)
    : motion_(mode == DerivativeMode::FiniteDifference ? motion.finite_difference_only()
                                                       : std::move(motion)),
      material_(std::move(material)),
      mode_(mode),
      source_mode_(sources),
      preset_(std::move(preset)),
      material_pivot_(material_pivot),
      ambient_pivot_(ambient_pivot) {
  if (mode_ == DerivativeMode::Analytic && !motion_.has_analytic_second_derivatives()) {
    throw Error(ErrorCode::PreconditionViolated,
                "analytic mode needs analytic second derivatives of motion '" + motion_.name() + "'");
  }
}

DerivativeMode Scenario::preferred_mode(const Motion& motion) {
  return motion.has_analytic_gradient() && motion.has_analytic_second_derivatives()
             ? DerivativeMode::Analytic
             : DerivativeMode::FiniteDifference;
}

double Scenario::body_potential(const Vector3& y) const {
  return preset_.potential ? preset_.potential->potential(y) : 0.0;
}

namespace {

struct StressPair {
  Tensor33 stress;
  Tensor33 eshelby;
};

StressPair stresses_at(const Scenario& s, const Vector3& x) {
  const Tensor33 f = s.motion().deformation_gradient(x);
  const double e = s.material().energy(x, f);
  const Tensor33 p = s.material().first_pk_stress(x, f);
  return {p, e * Tensor33::identity() - transpose(f) * p};
}

void fill_divergences(const Scenario& s, PointState& st) {
  const Vector3& x = st.x;
  if (s.mode() == DerivativeMode::Analytic) {
    const GradientDerivatives df = s.motion().gradient_derivatives(x);
    const ElasticityTensor a = s.material().tangent(x, st.deformation_gradient);
    const auto px = s.material().explicit_stress_gradient(x, st.deformation_gradient);
    Vector3 div_p, div_eshelby;
    for (std::size_t j = 0; j < 3; ++j) {
      const Tensor33 dp = px[j] + a.contract(df[j]);  // total ∂P/∂x_j
      const Tensor33 d_ftp = transpose(df[j]) * st.stress + transpose(st.deformation_gradient) * dp;
      for (std::size_t i = 0; i < 3; ++i) {
        div_p[i] += dp(i, j);
        div_eshelby[i] -= d_ftp(i, j);
      }
    }
    // ∂_i e along the motion: explicit part plus P : ∂F/∂x_i.
    for (std::size_t i = 0; i < 3; ++i) {
      div_eshelby[i] += st.explicit_gradient[i] + double_contraction(st.stress, df[i]);
    }
    st.stress_divergence = div_p;
    st.eshelby_divergence = div_eshelby;
    return;
  }
  const double h = s.motion().steps().second;
  Vector3 div_p, div_eshelby;
  for (std::size_t j = 0; j < 3; ++j) {
    Vector3 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const StressPair sp = stresses_at(s, xp);
    const StressPair sm = stresses_at(s, xm);
    for (std::size_t i = 0; i < 3; ++i) {
      div_p[i] += (sp.stress(i, j) - sm.stress(i, j)) / (2.0 * h);
      div_eshelby[i] += (sp.eshelby(i, j) - sm.eshelby(i, j)) / (2.0 * h);
    }
  }
  st.stress_divergence = div_p;
  st.eshelby_divergence = div_eshelby;
}

void fill_preset_sources(const Scenario& s, PointState& st) {
  const PresetSources& p = s.preset();
  st.body_force = p.potential ? p.potential->body_force(st.y) : p.body_force(st.x);
  st.driving_force = p.driving_force(st.x);
  st.couple = p.couple(st.x);
}

void fill_closure_sources(const Scenario& s, PointState& st) {
  const Tensor33& f = st.deformation_gradient;
  st.body_force = -st.stress_divergence;
  st.driving_force = st.eshelby_divergence - transpose(f) * st.body_force + st.explicit_gradient;
  st.couple = cross(st.x - s.material_pivot(), st.explicit_gradient - st.driving_force) -
              axial_vector(skew_part(st.eshelby));
}

}  // namespace

PointState evaluate_point_local(const Scenario& s, const Vector3& x) {
  PointState st;
  st.x = x;
  st.y = s.motion().place(x);
  st.deformation_gradient = s.motion().deformation_gradient(x);
  st.energy = s.material().energy(x, st.deformation_gradient);
  st.stress = s.material().first_pk_stress(x, st.deformation_gradient);
  st.eshelby = st.energy * Tensor33::identity() - transpose(st.deformation_gradient) * st.stress;
  st.explicit_gradient = s.material().explicit_material_gradient(x, st.deformation_gradient);
  st.potential = s.body_potential(st.y);
  if (s.source_mode() == SourceMode::Preset) fill_preset_sources(s, st);
  return st;
}

PointState evaluate_point(const Scenario& s, const Vector3& x) {
  PointState st = evaluate_point_local(s, x);
  fill_divergences(s, st);
  if (s.source_mode() == SourceMode::Closure) fill_closure_sources(s, st);
  return st;
}

Tensor33 eshelby_stress(const MaterialModel& model, const Motion& motion, const Vector3& x) {
  const Tensor33 f = motion.deformation_gradient(x);
  return model.energy(x, f) * Tensor33::identity() - transpose(f) * model.first_pk_stress(x, f);
}

Vector3 standard_force_residual(const Scenario& s, const Vector3& x) {
  const PointState st = evaluate_point(s, x);
  return st.stress_divergence + st.body_force;
}

Vector3 configurational_force_residual(const Scenario& s, const Vector3& x) {
  const PointState st = evaluate_point(s, x);
  return st.eshelby_divergence - transpose(st.deformation_gradient) * st.body_force +
         st.explicit_gradient - st.driving_force;
}

TorqueResiduals torque_residuals(const Scenario& s, const Vector3& x) {
  const PointState st = evaluate_point(s, x);
  const Tensor33 pft = st.stress * transpose(st.deformation_gradient);
  TorqueResiduals r;
  r.ambient = axial_vector(2.0 * skew_part(pft));
  r.configurational = axial_vector(skew_part(st.eshelby)) + st.couple -
                      cross(x - s.material_pivot(), st.explicit_gradient - st.driving_force);
  r.textbook = axial_vector(2.0 * skew_part(st.eshelby)) - st.couple;
  return r;
}

Vector3 eshelby_divergence_identity(const Scenario& s, const Vector3& x) {
  const PointState st = evaluate_point(s, x);
  return st.eshelby_divergence + transpose(st.deformation_gradient) * st.stress_divergence -
         st.explicit_gradient;
}

ClosureFields closure_fields(const Scenario& s) {
  // Evaluated as if the scenario were in closure mode, whatever its own mode.
  const Scenario closed(s.motion(), s.material(), s.mode(), SourceMode::Closure, s.preset(),
                        s.material_pivot(), s.ambient_pivot());
  return {
      [closed](const Vector3& x) { return evaluate_point(closed, x).body_force; },
      [closed](const Vector3& x) { return evaluate_point(closed, x).driving_force; },
      [closed](const Vector3& x) { return evaluate_point(closed, x).couple; },
  };
}

Vector3 noether_flux(const Scenario& s, const VirtualFieldPair& pair, const Vector3& x) {
  const PointState st = evaluate_point_local(s, x);
  const Vector3 w = pair.w(x);
  const Vector3 relative = pair.v(x) - st.deformation_gradient * w;
  return (st.energy + st.potential) * w + transpose(st.stress) * relative;
}

std::pair<double, double> noether_condition_residuals(const Scenario& s,
                                                      const VirtualFieldPair& pair,
                                                      const Vector3& x) {
  const PointState st = evaluate_point_local(s, x);
  const Vector3 du = s.preset().potential ? s.preset().potential->gradient(st.y) : Vector3{};
  const double ambient = dot(du, pair.v(x)) + double_contraction(st.stress, pair.v.gradient(x));
  const double material = dot(st.explicit_gradient, pair.w(x)) -
                          double_contraction(st.stress, st.deformation_gradient * pair.w.gradient(x));
  return {ambient, material};
}

double noether_flux_divergence(const Scenario& s, const VirtualFieldPair& pair, const Vector3& x,
                               double h) {
  double div = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    Vector3 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    div += (noether_flux(s, pair, xp)[j] - noether_flux(s, pair, xm)[j]) / (2.0 * h);
  }
  return div;
}

}  // namespace relpower
