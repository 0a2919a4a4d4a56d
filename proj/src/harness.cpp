#include "relpower/harness.hpp"

#include "relpower/error.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace relpower {

double tolerance_budget(DerivativeMode mode) {
  return mode == DerivativeMode::Analytic ? 1e-9 : 1e-5;
}

EvaluatedPart::EvaluatedPart(Scenario scenario, BodyPart part)
    : scenario_(std::move(scenario)), part_(std::move(part)) {
  volume_.reserve(part_.volume_nodes().size());
  for (const auto& n : part_.volume_nodes()) volume_.push_back(evaluate_point(scenario_, n.x));
  surface_.reserve(part_.surface_nodes().size());
  for (const auto& n : part_.surface_nodes()) surface_.push_back(evaluate_point_local(scenario_, n.x));
}

namespace {

template <class F>
double sum_volume(const EvaluatedPart& ep, F&& integrand) {
  CompensatedSum acc;
  const auto& nodes = ep.part().volume_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) acc.add(nodes[i].weight * integrand(ep.volume_states()[i]));
  return acc.value();
}

template <class F>
double sum_surface(const EvaluatedPart& ep, F&& integrand) {
  CompensatedSum acc;
  const auto& nodes = ep.part().surface_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    acc.add(nodes[i].weight * integrand(ep.surface_states()[i], nodes[i].normal));
  return acc.value();
}

template <class F>
Vector3 sum_volume_vector(const EvaluatedPart& ep, F&& integrand) {
  CompensatedVectorSum acc;
  const auto& nodes = ep.part().volume_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) acc.add(nodes[i].weight * integrand(ep.volume_states()[i]));
  return acc.value();
}

template <class F>
Vector3 sum_surface_vector(const EvaluatedPart& ep, F&& integrand) {
  CompensatedVectorSum acc;
  const auto& nodes = ep.part().surface_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    acc.add(nodes[i].weight * integrand(ep.surface_states()[i], nodes[i].normal));
  return acc.value();
}

}  // namespace

double RelativePower::gross() const {
  return std::abs(actions_bulk) + std::abs(actions_boundary) + std::abs(energy_flux) +
         std::abs(inhomogeneity) + std::abs(couple);
}

RelativePower relative_power(const EvaluatedPart& ep, const VirtualFieldPair& pair) {
  const Vector3 x0 = ep.scenario().material_pivot();
  RelativePower p;
  p.actions_bulk = sum_volume(ep, [&](const PointState& s) {
    return dot(s.body_force, pair.v(s.x) - s.deformation_gradient * pair.w(s.x));
  });
  p.actions_boundary = sum_surface(ep, [&](const PointState& s, const Vector3& n) {
    return dot(s.stress * n, pair.v(s.x) - s.deformation_gradient * pair.w(s.x));
  });
  p.energy_flux = sum_surface(ep, [&](const PointState& s, const Vector3& n) {
    return dot(n, pair.w(s.x)) * s.energy;
  });
  p.inhomogeneity = sum_volume(ep, [&](const PointState& s) {
    const Vector3 w = pair.w(s.x);
    const Vector3 curl = pair.w.curl(s.x);
    return dot(s.explicit_gradient - s.driving_force, w - cross(curl, s.x - x0));
  });
  p.couple = sum_volume(ep, [&](const PointState& s) { return dot(s.couple, pair.w.curl(s.x)); });
  return p;
}

InnerPower inner_relative_power(const EvaluatedPart& ep, const VirtualFieldPair& pair) {
  const Vector3 x0 = ep.scenario().material_pivot();
  InnerPower p;
  p.standard = sum_volume(ep, [&](const PointState& s) {
    return double_contraction(s.stress, pair.v.gradient(s.x));
  });
  p.eshelby = sum_volume(ep, [&](const PointState& s) {
    return double_contraction(s.eshelby, pair.w.gradient(s.x));
  });
  p.skew = sum_volume(ep, [&](const PointState& s) {
    const Tensor33 lever = outer(s.x - x0, s.explicit_gradient - s.driving_force);
    return -double_contraction(lever, skew_part(pair.w.gradient(s.x)));
  });
  p.couple = sum_volume(ep, [&](const PointState& s) { return dot(s.couple, pair.w.curl(s.x)); });
  return p;
}

double standard_external_power(const EvaluatedPart& ep, const VectorField& v) {
  const double bulk = sum_volume(ep, [&](const PointState& s) { return dot(s.body_force, v(s.x)); });
  const double boundary = sum_surface(ep, [&](const PointState& s, const Vector3& n) {
    return dot(s.stress * n, v(s.x));
  });
  return bulk + boundary;
}

double inner_power_gap(const EvaluatedPart& ep, const VirtualFieldPair& pair) {
  const Vector3 x0 = ep.scenario().material_pivot();
  return sum_volume(ep, [&](const PointState& s) {
    const Vector3 g = s.explicit_gradient - s.driving_force;
    return dot(2.0 * s.explicit_gradient - s.driving_force, pair.w(s.x)) +
           1.5 * dot(pair.w.curl(s.x), cross(g, s.x - x0));
  });
}

BalanceTerms balance_terms(const EvaluatedPart& ep, const Pivots& pv) {
  BalanceTerms t;
  t.body_force = sum_volume_vector(ep, [](const PointState& s) { return s.body_force; });
  t.traction = sum_surface_vector(ep, [](const PointState& s, const Vector3& n) { return s.stress * n; });
  t.body_moment = sum_volume_vector(ep, [&](const PointState& s) { return cross(s.y - pv.ambient, s.body_force); });
  t.traction_moment = sum_surface_vector(ep, [&](const PointState& s, const Vector3& n) {
    return cross(s.y - pv.ambient, s.stress * n);
  });
  t.eshelby_flux = sum_surface_vector(ep, [](const PointState& s, const Vector3& n) { return s.eshelby * n; });
  t.pulled_back_force = sum_volume_vector(ep, [](const PointState& s) {
    return transpose(s.deformation_gradient) * s.body_force;
  });
  t.inhomogeneity = sum_volume_vector(ep, [](const PointState& s) { return s.explicit_gradient - s.driving_force; });
  t.eshelby_moment = sum_surface_vector(ep, [&](const PointState& s, const Vector3& n) {
    return cross(s.x - pv.material, s.eshelby * n);
  });
  t.pulled_back_moment = sum_volume_vector(ep, [&](const PointState& s) {
    return cross(s.x - pv.material, transpose(s.deformation_gradient) * s.body_force);
  });
  t.couple = sum_volume_vector(ep, [](const PointState& s) { return s.couple; });
  t.inhomogeneity_moment = sum_volume_vector(ep, [&](const PointState& s) {
    return cross(s.x - pv.material, s.explicit_gradient - s.driving_force);
  });
  return t;
}

BalanceTerms balance_terms(const EvaluatedPart& ep) {
  return balance_terms(ep, {ep.scenario().material_pivot(), ep.scenario().ambient_pivot()});
}

IntegralBalances integral_balance_residuals(const EvaluatedPart& ep, const Pivots& pivots) {
  const BalanceTerms t = balance_terms(ep, pivots);
  return {t.force(), t.torque(), t.configurational_force(), t.configurational_torque()};
}

IntegralBalances integral_balance_residuals(const EvaluatedPart& ep) {
  return integral_balance_residuals(ep, {ep.scenario().material_pivot(), ep.scenario().ambient_pivot()});
}

namespace {

struct Generators {
  Vector3 c_hat, q_hat, c, q;
};

double defect_with_gross(const EvaluatedPart& ep, const VirtualFieldPair& pair, const RelativePower& base,
                         const Generators& g, double* gross) {
  const Scenario& s = ep.scenario();
  const ObserverChange change{g.c_hat, g.q_hat, s.ambient_pivot(), g.c, g.q, s.material_pivot()};
  const RelativePower changed = relative_power(ep, changed_pair(pair, s.motion(), change));
  if (gross) *gross = changed.gross() + base.gross();
  return changed.total() - base.total();
}

}  // namespace

double invariance_defect(const EvaluatedPart& ep, const VirtualFieldPair& pair,
                         const Vector3& ambient_translation, const Vector3& ambient_rotation,
                         const Vector3& material_translation, const Vector3& material_rotation) {
  const RelativePower base = relative_power(ep, pair);
  return defect_with_gross(ep, pair, base,
                           {ambient_translation, ambient_rotation, material_translation, material_rotation},
                           nullptr);
}

InvarianceDecomposition invariance_decomposition(const EvaluatedPart& ep, const VirtualFieldPair& pair,
                                                 const InvarianceOptions& options) {
  const RelativePower base = relative_power(ep, pair);
  InvarianceDecomposition d;
  d.base_power = base.total();
  Vector3* slots[4] = {&d.ambient_translation, &d.ambient_rotation, &d.material_translation,
                       &d.material_rotation};
  for (std::size_t group = 0; group < 4; ++group) {
    for (std::size_t i = 0; i < 3; ++i) {
      Generators g;
      Vector3* target[4] = {&g.c_hat, &g.q_hat, &g.c, &g.q};
      *target[group] = Vector3::unit(i);
      (*slots[group])[i] = defect_with_gross(ep, pair, base, g, nullptr);
    }
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_vector = [&] { return Vector3{unit(rng), unit(rng), unit(rng)}; };
  for (int k = 0; k < options.probes; ++k) {
    Generators g{random_vector(), random_vector(), random_vector(), random_vector()};
    double gross = 0.0;
    const double defect = defect_with_gross(ep, pair, base, g, &gross);
    const double predicted = dot(d.ambient_translation, g.c_hat) + dot(d.ambient_rotation, g.q_hat) +
                             dot(d.material_translation, g.c) + dot(d.material_rotation, g.q);
    const double misfit = std::abs(defect - predicted) / std::max(gross, 1e-300);
    d.affine_residual = std::max(d.affine_residual, misfit);
  }
  if (d.affine_residual > options.affine_tolerance) {
    std::ostringstream os;
    os << "invariance defect is not affine in the generators (relative misfit " << d.affine_residual << ")";
    throw Error(ErrorCode::NonAffineDefect, os.str());
  }
  return d;
}

double power_scale(const EvaluatedPart& ep) {
  const double length = ep.part().length_scale();
  const double boundary = sum_surface(ep, [](const PointState& s, const Vector3&) {
    return frobenius_norm(s.stress) + frobenius_norm(s.eshelby);
  });
  const double bulk = sum_volume(ep, [](const PointState& s) {
    return norm(s.body_force) * (1.0 + frobenius_norm(s.deformation_gradient)) +
           norm(s.explicit_gradient - s.driving_force);
  });
  const double couples = sum_volume(ep, [](const PointState& s) { return norm(s.couple); });
  return std::max(1.0, (1.0 + length) * (boundary + bulk) + couples);
}

Vector3 eshelby_flux(const Scenario& scenario, const BodyPart& part) {
  return surface_integral(part, [&](const Vector3& x, const Vector3& n) {
    return eshelby_stress(scenario.material(), scenario.motion(), x) * n;
  });
}

SurfaceIndependence flux_difference(const Scenario& scenario, const BodyPart& inner, const BodyPart& outer) {
  SurfaceIndependence r;
  r.inner_flux = eshelby_flux(scenario, inner);
  r.outer_flux = eshelby_flux(scenario, outer);
  r.difference = norm(r.outer_flux - r.inner_flux);
  return r;
}

SurfaceIndependence surface_independence_check(const Scenario& scenario, const BodyPart& inner,
                                               const BodyPart& outer) {
  if (!scenario.material().flags().homogeneous) {
    throw Error(ErrorCode::PreconditionViolated, "surface independence needs a homogeneous material");
  }
  if (scenario.source_mode() != SourceMode::Preset) {
    throw Error(ErrorCode::PreconditionViolated, "surface independence needs prescribed (vanishing) sources");
  }
  const double tol = tolerance_budget(scenario.mode());
  for (const BodyPart* part : {&inner, &outer}) {
    for (const SurfaceNode& n : part->surface_nodes()) {
      const PointState s = evaluate_point(scenario, n.x);
      if (norm(s.body_force) != 0.0 || norm(s.driving_force) != 0.0 || norm(s.couple) != 0.0) {
        throw Error(ErrorCode::PreconditionViolated, "surface independence needs b = f = μ = 0");
      }
      const double scale = std::max(1.0, frobenius_norm(s.stress) / part->length_scale());
      if (norm(s.stress_divergence) > tol * scale) {
        std::ostringstream os;
        os << "motion is not an equilibrium: |Div P| = " << norm(s.stress_divergence) << " at " << n.x;
        throw Error(ErrorCode::PreconditionViolated, os.str());
      }
    }
  }
  return flux_difference(scenario, inner, outer);
}

}  // namespace relpower
