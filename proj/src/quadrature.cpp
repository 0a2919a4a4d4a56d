#include "relpower/quadrature.hpp"

#include "relpower/error.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace relpower {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorCode::PreconditionViolated, "Gauss order must be positive");
  const auto n = static_cast<std::size_t>(order);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; roots are
  // symmetric, so only the upper half is computed.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        const double kd = static_cast<double>(k);
        p0 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p2) / kd;
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      const double kd = static_cast<double>(k);
      p0 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p2) / kd;
    }
    dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<SphereNode> lebedev26() {
  constexpr double four_pi = 4.0 * std::numbers::pi;
  const double a2 = 1.0 / std::sqrt(2.0);
  const double a3 = 1.0 / std::sqrt(3.0);
  std::vector<SphereNode> rule;
  rule.reserve(26);
  for (std::size_t axis = 0; axis < 3; ++axis)
    for (double s : {1.0, -1.0}) {
      Vector3 d;
      d[axis] = s;
      rule.push_back({d, four_pi / 21.0});
    }
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = p + 1; q < 3; ++q)
      for (double sp : {1.0, -1.0})
        for (double sq : {1.0, -1.0}) {
          Vector3 d;
          d[p] = sp * a2;
          d[q] = sq * a2;
          rule.push_back({d, four_pi * 4.0 / 105.0});
        }
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0})
      for (double sz : {1.0, -1.0}) rule.push_back({{sx * a3, sy * a3, sz * a3}, four_pi * 9.0 / 280.0});
  return rule;
}

std::vector<SphereNode> product_sphere_rule(int order) {
  const GaussRule g = gauss_legendre(order);
  const int n_phi = 2 * order;
  const double d_phi = 2.0 * std::numbers::pi / n_phi;
  std::vector<SphereNode> rule;
  rule.reserve(g.nodes.size() * static_cast<std::size_t>(n_phi));
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double ct = g.nodes[i];
    const double st = std::sqrt(1.0 - ct * ct);
    for (int k = 0; k < n_phi; ++k) {
      const double phi = (k + 0.5) * d_phi;
      rule.push_back({{st * std::cos(phi), st * std::sin(phi), ct}, g.weights[i] * d_phi});
    }
  }
  return rule;
}

// ---------------------------------------------------------------------------
// BodyPart

BodyPart::BodyPart(Shape shape, const Vector3& center, const Vector3& extents, double r_in,
                   double r_out, QuadratureSpec q)
    : shape_(shape), center_(center), extents_(extents), inner_radius_(r_in), outer_radius_(r_out), spec_(q) {
  build_rules();
}

BodyPart BodyPart::box(const Vector3& center, const Vector3& half_extents, QuadratureSpec q) {
  for (std::size_t i = 0; i < 3; ++i)
    if (!(half_extents[i] > 0.0))
      throw Error(ErrorCode::PreconditionViolated, "box half extents must be positive");
  return {Shape::Box, center, half_extents, 0.0, 0.0, q};
}

BodyPart BodyPart::ball(const Vector3& center, double radius, QuadratureSpec q) {
  if (!(radius > 0.0)) throw Error(ErrorCode::PreconditionViolated, "ball radius must be positive");
  return {Shape::Ball, center, {}, 0.0, radius, q};
}

BodyPart BodyPart::shell(const Vector3& center, double inner_radius, double outer_radius,
                         QuadratureSpec q) {
  if (!(inner_radius > 0.0) || !(outer_radius > inner_radius))
    throw Error(ErrorCode::PreconditionViolated, "shell needs 0 < inner radius < outer radius");
  return {Shape::Shell, center, {}, inner_radius, outer_radius, q};
}

BodyPart BodyPart::with_quadrature(QuadratureSpec q) const {
  return {shape_, center_, extents_, inner_radius_, outer_radius_, q};
}

std::pair<BodyPart, BodyPart> BodyPart::split(std::size_t axis) const {
  if (shape_ != Shape::Box) throw Error(ErrorCode::PreconditionViolated, "only boxes can be split");
  Vector3 half = extents_;
  half[axis] *= 0.5;
  Vector3 lo = center_, hi = center_;
  lo[axis] -= half[axis];
  hi[axis] += half[axis];
  return {box(lo, half, spec_), box(hi, half, spec_)};
}

double BodyPart::measure() const {
  constexpr double pi = std::numbers::pi;
  switch (shape_) {
    case Shape::Box: return 8.0 * extents_[0] * extents_[1] * extents_[2];
    case Shape::Ball: return 4.0 / 3.0 * pi * std::pow(outer_radius_, 3);
    case Shape::Shell: return 4.0 / 3.0 * pi * (std::pow(outer_radius_, 3) - std::pow(inner_radius_, 3));
  }
  return 0.0;
}

double BodyPart::boundary_area() const {
  constexpr double pi = std::numbers::pi;
  const Vector3& h = extents_;
  switch (shape_) {
    case Shape::Box: return 8.0 * (h[0] * h[1] + h[1] * h[2] + h[0] * h[2]);
    case Shape::Ball: return 4.0 * pi * outer_radius_ * outer_radius_;
    case Shape::Shell: return 4.0 * pi * (outer_radius_ * outer_radius_ + inner_radius_ * inner_radius_);
  }
  return 0.0;
}

double BodyPart::length_scale() const {
  if (shape_ == Shape::Box) return 2.0 * std::max({extents_[0], extents_[1], extents_[2]});
  return 2.0 * outer_radius_;
}

bool BodyPart::contains(const Vector3& x) const {
  const Vector3 d = x - center_;
  switch (shape_) {
    case Shape::Box:
      return std::abs(d[0]) <= extents_[0] && std::abs(d[1]) <= extents_[1] && std::abs(d[2]) <= extents_[2];
    case Shape::Ball: return norm(d) <= outer_radius_;
    case Shape::Shell: return norm(d) >= inner_radius_ && norm(d) <= outer_radius_;
  }
  return false;
}

void BodyPart::build_rules() {
  const GaussRule g = gauss_legendre(spec_.order);
  const std::size_t n = g.nodes.size();
  volume_.clear();
  surface_.clear();
  if (shape_ == Shape::Box) {
    const Vector3& h = extents_;
    volume_.reserve(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const Vector3 x = center_ + Vector3{h[0] * g.nodes[i], h[1] * g.nodes[j], h[2] * g.nodes[k]};
          volume_.push_back({x, h[0] * h[1] * h[2] * g.weights[i] * g.weights[j] * g.weights[k]});
        }
    for (std::size_t axis = 0; axis < 3; ++axis) {
      const std::size_t p = (axis + 1) % 3;
      const std::size_t q = (axis + 2) % 3;
      for (double side : {-1.0, 1.0}) {
        Vector3 normal;
        normal[axis] = side;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            Vector3 x = center_;
            x[axis] += side * h[axis];
            x[p] += h[p] * g.nodes[i];
            x[q] += h[q] * g.nodes[j];
            surface_.push_back({x, normal, h[p] * h[q] * g.weights[i] * g.weights[j]});
          }
      }
    }
    return;
  }
  const std::vector<SphereNode> angular =
      spec_.angular == AngularRule::Lebedev26 ? lebedev26() : product_sphere_rule(spec_.angular_order);
  const double r0 = shape_ == Shape::Shell ? inner_radius_ : 0.0;
  const double r1 = outer_radius_;
  const double half = 0.5 * (r1 - r0);
  const double mid = 0.5 * (r1 + r0);
  volume_.reserve(n * angular.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double r = mid + half * g.nodes[i];
    const double radial_weight = half * g.weights[i] * r * r;
    for (const SphereNode& a : angular) volume_.push_back({center_ + r * a.direction, radial_weight * a.weight});
  }
  for (const SphereNode& a : angular) {
    surface_.push_back({center_ + r1 * a.direction, a.direction, r1 * r1 * a.weight});
  }
  if (shape_ == Shape::Shell) {
    for (const SphereNode& a : angular) {
      surface_.push_back({center_ + r0 * a.direction, -a.direction, r0 * r0 * a.weight});
    }
  }
}

}  // namespace relpower
