#pragma once

// Body parts and their volume/boundary quadrature rules.

#include "relpower/tensor.hpp"

#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

namespace relpower {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int order);

struct SphereNode {
  Vector3 direction;  ///< unit vector
  double weight;      ///< weights sum to 4π
};

/// Degree-7 exact 26-point rule on the unit sphere.
std::vector<SphereNode> lebedev26();
/// Gauss-Legendre in cos θ times uniform φ (order × 2·order points).
std::vector<SphereNode> product_sphere_rule(int order);

enum class AngularRule { Lebedev26, Product };

struct QuadratureSpec {
  int order = 6;  ///< Gauss points per axis / radially
  AngularRule angular = AngularRule::Lebedev26;
  int angular_order = 8;  ///< only for AngularRule::Product
};

struct VolumeNode {
  Vector3 x;
  double weight;
};

struct SurfaceNode {
  Vector3 x;
  Vector3 normal;  ///< outward unit normal
  double weight;
};

/// Integrable region of the reference body: axis-aligned box, ball or
/// spherical shell.
class BodyPart {
 public:
  enum class Shape { Box, Ball, Shell };

  static BodyPart box(const Vector3& center, const Vector3& half_extents, QuadratureSpec q = {});
  static BodyPart ball(const Vector3& center, double radius, QuadratureSpec q = {});
  static BodyPart shell(const Vector3& center, double inner_radius, double outer_radius,
                        QuadratureSpec q = {});

  Shape shape() const { return shape_; }
  const Vector3& center() const { return center_; }
  const Vector3& half_extents() const { return extents_; }
  double inner_radius() const { return inner_radius_; }
  double outer_radius() const { return outer_radius_; }
  const QuadratureSpec& quadrature() const { return spec_; }

  /// Exact |𝔟|.
  double measure() const;
  /// Exact area of ∂𝔟.
  double boundary_area() const;
  /// Characteristic length: the largest extent (diameter or box edge).
  double length_scale() const;
  bool contains(const Vector3& x) const;

  const std::vector<VolumeNode>& volume_nodes() const { return volume_; }
  const std::vector<SurfaceNode>& surface_nodes() const { return surface_; }

  BodyPart with_quadrature(QuadratureSpec q) const;

  /// Splits a box into two halves across the given axis.
  std::pair<BodyPart, BodyPart> split(std::size_t axis) const;

 private:
  BodyPart(Shape shape, const Vector3& center, const Vector3& extents, double r_in, double r_out,
           QuadratureSpec q);
  void build_rules();

  Shape shape_;
  Vector3 center_;
  Vector3 extents_;
  double inner_radius_ = 0.0;
  double outer_radius_ = 0.0;
  QuadratureSpec spec_;
  std::vector<VolumeNode> volume_;
  std::vector<SurfaceNode> surface_;
};

/// Neumaier-compensated accumulator; the summation order is the node order,
/// so results are reproducible bit for bit.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class CompensatedVectorSum {
 public:
  void add(const Vector3& v) {
    for (std::size_t i = 0; i < 3; ++i) c_[i].add(v[i]);
  }
  Vector3 value() const { return {c_[0].value(), c_[1].value(), c_[2].value()}; }

 private:
  CompensatedSum c_[3];
};

template <class Integrand>
auto volume_integral(const BodyPart& part, Integrand&& integrand) {
  using Result = std::decay_t<decltype(integrand(std::declval<const Vector3&>()))>;
  if constexpr (std::is_same_v<Result, double>) {
    CompensatedSum acc;
    for (const auto& n : part.volume_nodes()) acc.add(n.weight * integrand(n.x));
    return acc.value();
  } else {
    CompensatedVectorSum acc;
    for (const auto& n : part.volume_nodes()) acc.add(n.weight * integrand(n.x));
    return acc.value();
  }
}

template <class Integrand>
auto surface_integral(const BodyPart& part, Integrand&& integrand) {
  using Result = std::decay_t<decltype(integrand(std::declval<const Vector3&>(),
                                                 std::declval<const Vector3&>()))>;
  if constexpr (std::is_same_v<Result, double>) {
    CompensatedSum acc;
    for (const auto& n : part.surface_nodes()) acc.add(n.weight * integrand(n.x, n.normal));
    return acc.value();
  } else {
    CompensatedVectorSum acc;
    for (const auto& n : part.surface_nodes()) acc.add(n.weight * integrand(n.x, n.normal));
    return acc.value();
  }
}

}  // namespace relpower
