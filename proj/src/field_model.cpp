#include "relpower/field_model.hpp"

#include "relpower/error.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace relpower {

namespace {

void require_finite_point(const Vector3& x) {
  if (!is_finite(x)) {
    throw Error(ErrorCode::EvaluationOutOfDomain, "non-finite evaluation point");
  }
}

// Central difference of a map R³ → R³, column j = ∂f/∂x_j.
template <class F>
Tensor33 central_jacobian(const F& f, const Vector3& x, double h) {
  Tensor33 g;
  for (std::size_t j = 0; j < 3; ++j) {
    Vector3 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Vector3 d = (f(xp) - f(xm)) / (2.0 * h);
    for (std::size_t i = 0; i < 3; ++i) g(i, j) = d[i];
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Motion

Motion::Motion(std::string name, PointMap placement, std::optional<GradientMap> gradient,
               std::optional<SecondDerivativeMap> second, FiniteDifferenceSteps steps,
               DomainPredicate domain)
    : name_(std::move(name)),
      placement_(std::move(placement)),
      gradient_(std::move(gradient)),
      second_(std::move(second)),
      steps_(steps),
      domain_(std::move(domain)) {}

bool Motion::in_domain(const Vector3& x) const {
  return is_finite(x) && (!domain_ || domain_(x));
}

void Motion::require_domain(const Vector3& x) const {
  require_finite_point(x);
  if (domain_ && !domain_(x)) {
    std::ostringstream os;
    os << "point " << x << " outside the domain of motion '" << name_ << "'";
    throw Error(ErrorCode::EvaluationOutOfDomain, os.str());
  }
}

Vector3 Motion::place(const Vector3& x) const {
  require_domain(x);
  const Vector3 y = placement_(x);
  if (!is_finite(y)) {
    throw Error(ErrorCode::EvaluationOutOfDomain, "motion '" + name_ + "' produced a non-finite place");
  }
  return y;
}

Tensor33 Motion::deformation_gradient_fd(const Vector3& x) const {
  require_domain(x);
  return central_jacobian(placement_, x, steps_.first);
}

Tensor33 Motion::raw_gradient(const Vector3& x) const {
  return gradient_ ? (*gradient_)(x) : central_jacobian(placement_, x, steps_.first);
}

Tensor33 Motion::deformation_gradient(const Vector3& x) const {
  require_domain(x);
  const Tensor33 f = raw_gradient(x);
  const double det = determinant(f);
  if (!(det > 0.0)) {
    std::ostringstream os;
    os << "det F = " << det << " at " << x << " for motion '" << name_ << "'";
    throw Error(ErrorCode::NonPositiveJacobian, os.str());
  }
  return f;
}

GradientDerivatives Motion::gradient_derivatives(const Vector3& x) const {
  require_domain(x);
  if (second_) return (*second_)(x);
  GradientDerivatives d;
  const double h = steps_.second;
  for (std::size_t j = 0; j < 3; ++j) {
    Vector3 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    d[j] = (1.0 / (2.0 * h)) * (raw_gradient(xp) - raw_gradient(xm));
  }
  return d;
}

Motion Motion::finite_difference_only() const {
  return Motion(name_, placement_, std::nullopt, std::nullopt, steps_, domain_);
}

Motion Motion::with_steps(FiniteDifferenceSteps steps) const {
  Motion m = *this;
  m.steps_ = steps;
  return m;
}

namespace motions {

Motion identity() {
  return Motion(
      "identity", [](const Vector3& x) { return x; },
      [](const Vector3&) { return Tensor33::identity(); },
      [](const Vector3&) { return GradientDerivatives{}; });
}

Motion homogeneous(const Tensor33& f0) {
  return Motion(
      "homogeneous", [f0](const Vector3& x) { return f0 * x; },
      [f0](const Vector3&) { return f0; }, [](const Vector3&) { return GradientDerivatives{}; });
}

Motion rigid_rotation(const Tensor33& rotation, const Vector3& center) {
  return Motion(
      "rigid-rotation",
      [rotation, center](const Vector3& x) { return rotation * (x - center) + center; },
      [rotation](const Vector3&) { return rotation; },
      [](const Vector3&) { return GradientDerivatives{}; });
}

Motion simple_shear(double gamma) {
  Tensor33 f = Tensor33::identity();
  f(0, 1) = gamma;
  return Motion(
      "simple-shear", [gamma](const Vector3& x) { return Vector3{x[0] + gamma * x[1], x[1], x[2]}; },
      [f](const Vector3&) { return f; }, [](const Vector3&) { return GradientDerivatives{}; });
}

Motion harmonic(double alpha, double source_strength, double gamma) {
  const double a = alpha;
  const double b = source_strength;
  const double g = gamma;
  auto place = [a, b, g](const Vector3& x) {
    Vector3 y = x + Vector3{a * (x[0] * x[0] - x[1] * x[1]) + g * x[0] * x[1], -2.0 * a * x[0] * x[1], 0.0};
    if (b != 0.0) {
      const double r = norm(x);
      y += (b / (r * r * r)) * x;
    }
    return y;
  };
  auto gradient = [a, b, g](const Vector3& x) {
    Tensor33 f = Tensor33::identity();
    f(0, 0) += 2.0 * a * x[0] + g * x[1];
    f(0, 1) += -2.0 * a * x[1] + g * x[0];
    f(1, 0) += -2.0 * a * x[1];
    f(1, 1) += -2.0 * a * x[0];
    if (b != 0.0) {
      const double r = norm(x);
      const double r3 = r * r * r;
      const double r5 = r3 * r * r;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          f(i, j) += b * ((i == j ? 1.0 / r3 : 0.0) - 3.0 * x[i] * x[j] / r5);
    }
    return f;
  };
  auto second = [a, b, g](const Vector3& x) {
    GradientDerivatives d{};
    d[0](0, 0) = 2.0 * a;
    d[0](1, 1) = -2.0 * a;
    d[0](0, 1) = g;
    d[1](0, 0) = g;
    d[1](0, 1) = -2.0 * a;
    d[1](1, 0) = -2.0 * a;
    if (b != 0.0) {
      const double r = norm(x);
      const double r2 = r * r;
      const double r5 = r2 * r2 * r;
      const double r7 = r5 * r2;
      auto delta = [](std::size_t p, std::size_t q) { return p == q ? 1.0 : 0.0; };
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j)
            d[k](i, j) += b * (-3.0 * (delta(i, j) * x[k] + delta(i, k) * x[j] + delta(j, k) * x[i]) / r5 +
                               15.0 * x[i] * x[j] * x[k] / r7);
    }
    return d;
  };
  DomainPredicate domain;
  if (b != 0.0) domain = [](const Vector3& x) { return norm(x) > 0.0; };
  return Motion("harmonic", place, gradient, second, {}, domain);
}

Motion sinusoidal(double amplitude, const Vector3& k, const Vector3& d) {
  return Motion(
      "sinusoidal", [=](const Vector3& x) { return x + (amplitude * std::sin(dot(k, x))) * d; },
      [=](const Vector3& x) {
        return Tensor33::identity() + (amplitude * std::cos(dot(k, x))) * outer(d, k);
      },
      [=](const Vector3& x) {
        GradientDerivatives g;
        const Tensor33 dk = (-amplitude * std::sin(dot(k, x))) * outer(d, k);
        for (std::size_t j = 0; j < 3; ++j) g[j] = k[j] * dk;
        return g;
      });
}

Motion rotated(const Motion& base, const Tensor33& rotation) {
  std::optional<GradientMap> gradient;
  std::optional<SecondDerivativeMap> second;
  if (base.has_analytic_gradient()) {
    gradient = [base, rotation](const Vector3& x) { return rotation * base.deformation_gradient(x); };
  }
  if (base.has_analytic_second_derivatives()) {
    second = [base, rotation](const Vector3& x) {
      GradientDerivatives d = base.gradient_derivatives(x);
      for (auto& t : d) t = rotation * t;
      return d;
    };
  }
  return Motion(
      base.name() + "+rotation", [base, rotation](const Vector3& x) { return rotation * base.place(x); },
      gradient, second, base.steps(), [base](const Vector3& x) { return base.in_domain(x); });
}

}  // namespace motions

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(PointMap value, std::optional<GradientMap> gradient, double fd_step)
    : value_(std::move(value)), gradient_(std::move(gradient)), fd_step_(fd_step) {}

Vector3 VectorField::operator()(const Vector3& x) const {
  require_finite_point(x);
  const Vector3 v = value_(x);
  if (!is_finite(v)) throw Error(ErrorCode::EvaluationOutOfDomain, "virtual field is not finite");
  return v;
}

Tensor33 VectorField::gradient_fd(const Vector3& x) const {
  require_finite_point(x);
  return central_jacobian(value_, x, fd_step_);
}

Tensor33 VectorField::gradient(const Vector3& x) const {
  require_finite_point(x);
  return gradient_ ? (*gradient_)(x) : central_jacobian(value_, x, fd_step_);
}

Vector3 VectorField::curl(const Vector3& x) const {
  const Tensor33 g = gradient(x);
  return {g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1)};
}

double VectorField::divergence(const Vector3& x) const { return trace(gradient(x)); }

VectorField VectorField::finite_difference_only() const {
  return VectorField(value_, std::nullopt, fd_step_);
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  std::optional<GradientMap> gradient;
  if (a.gradient_ && b.gradient_) {
    gradient = [ga = *a.gradient_, gb = *b.gradient_](const Vector3& x) { return ga(x) + gb(x); };
  }
  return VectorField([va = a.value_, vb = b.value_](const Vector3& x) { return va(x) + vb(x); },
                     gradient, std::min(a.fd_step_, b.fd_step_));
}

VectorField operator*(double s, const VectorField& a) {
  std::optional<GradientMap> gradient;
  if (a.gradient_) gradient = [s, g = *a.gradient_](const Vector3& x) { return s * g(x); };
  return VectorField([s, v = a.value_](const Vector3& x) { return s * v(x); }, gradient, a.fd_step_);
}

namespace fields {

VectorField zero() { return constant({}); }

VectorField constant(const Vector3& value) {
  return VectorField([value](const Vector3&) { return value; },
                     [](const Vector3&) { return Tensor33::zero(); });
}

VectorField rigid(const Vector3& c, const Vector3& q, const Vector3& pivot) {
  const Tensor33 qx = cross_matrix(q);
  return VectorField([=](const Vector3& x) { return c + cross(q, x - pivot); },
                     [qx](const Vector3&) { return qx; });
}

VectorField linear(const Tensor33& a, const Vector3& offset) {
  return VectorField([=](const Vector3& x) { return offset + a * x; },
                     [a](const Vector3&) { return a; });
}

VectorField sinusoidal(double amplitude, const Vector3& k, const Vector3& d) {
  return VectorField([=](const Vector3& x) { return (amplitude * std::sin(dot(k, x))) * d; },
                     [=](const Vector3& x) { return (amplitude * std::cos(dot(k, x))) * outer(d, k); });
}

}  // namespace fields

// ---------------------------------------------------------------------------
// Observer changes

Vector3 apply_ambient_change(const VirtualFieldPair& pair, const Motion& motion,
                             const ObserverChange& change, const Vector3& x) {
  return change.ambient_translation +
         cross(change.ambient_rotation, motion.place(x) - change.ambient_pivot) + pair.v(x);
}

Vector3 apply_material_change(const VirtualFieldPair& pair, const ObserverChange& change,
                              const Vector3& x) {
  return change.material_translation +
         cross(change.material_rotation, x - change.material_pivot) + pair.w(x);
}

Vector3 curl_w(const VirtualFieldPair& pair, const Vector3& x) { return pair.w.curl(x); }

VirtualFieldPair changed_pair(const VirtualFieldPair& pair, const Motion& motion,
                              const ObserverChange& change) {
  const VectorField ambient_part(
      [motion, change](const Vector3& x) {
        return change.ambient_translation +
               cross(change.ambient_rotation, motion.place(x) - change.ambient_pivot);
      },
      [motion, qx = cross_matrix(change.ambient_rotation)](const Vector3& x) {
        return qx * motion.deformation_gradient(x);
      },
      pair.v.fd_step());
  const VectorField material_part =
      fields::rigid(change.material_translation, change.material_rotation, change.material_pivot);
  return {ambient_part + pair.v, material_part + pair.w};
}

}  // namespace relpower
