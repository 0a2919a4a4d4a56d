#pragma once

// Fixed-size 3-vector and 3x3 tensor algebra.
//
// Tensor33 stores components row-major: T(i, j) is row i, column j. Two-point
// (P, F) and one-point (Eshelby stress, identity) tensors share the type; the
// field layer is responsible for using them consistently.

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace relpower {

struct Vector3 {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Vector3() = default;
  constexpr Vector3(double x, double y, double z) : c{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  static constexpr Vector3 zero() { return {}; }
  static constexpr Vector3 unit(std::size_t i) {
    Vector3 e;
    e.c[i] = 1.0;
    return e;
  }

  constexpr Vector3& operator+=(const Vector3& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Vector3& operator-=(const Vector3& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Vector3& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vector3&, const Vector3&) = default;
};

constexpr Vector3 operator+(Vector3 a, const Vector3& b) { return a += b; }
constexpr Vector3 operator-(Vector3 a, const Vector3& b) { return a -= b; }
constexpr Vector3 operator-(Vector3 a) { return a *= -1.0; }
constexpr Vector3 operator*(double s, Vector3 a) { return a *= s; }
constexpr Vector3 operator*(Vector3 a, double s) { return a *= s; }
constexpr Vector3 operator/(Vector3 a, double s) { return a *= (1.0 / s); }

constexpr double dot(const Vector3& a, const Vector3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

constexpr Vector3 cross(const Vector3& a, const Vector3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vector3& a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vector3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

struct Tensor33 {
  std::array<double, 9> c{};

  constexpr Tensor33() = default;
  constexpr Tensor33(double a00, double a01, double a02, double a10, double a11, double a12,
                     double a20, double a21, double a22)
      : c{a00, a01, a02, a10, a11, a12, a20, a21, a22} {}

  constexpr double& operator()(std::size_t i, std::size_t j) { return c[3 * i + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return c[3 * i + j]; }

  static constexpr Tensor33 zero() { return {}; }
  static constexpr Tensor33 identity() { return diag(1.0, 1.0, 1.0); }
  static constexpr Tensor33 diag(double a, double b, double d) {
    return {a, 0.0, 0.0, 0.0, b, 0.0, 0.0, 0.0, d};
  }
  static constexpr Tensor33 from_rows(const Vector3& r0, const Vector3& r1, const Vector3& r2) {
    return {r0[0], r0[1], r0[2], r1[0], r1[1], r1[2], r2[0], r2[1], r2[2]};
  }
  static constexpr Tensor33 from_columns(const Vector3& c0, const Vector3& c1, const Vector3& c2) {
    return {c0[0], c1[0], c2[0], c0[1], c1[1], c2[1], c0[2], c1[2], c2[2]};
  }

  constexpr Vector3 row(std::size_t i) const { return {c[3 * i], c[3 * i + 1], c[3 * i + 2]}; }
  constexpr Vector3 column(std::size_t j) const { return {c[j], c[3 + j], c[6 + j]}; }

  constexpr Tensor33& operator+=(const Tensor33& o) {
    for (std::size_t i = 0; i < 9; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Tensor33& operator-=(const Tensor33& o) {
    for (std::size_t i = 0; i < 9; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Tensor33& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }

  friend constexpr bool operator==(const Tensor33&, const Tensor33&) = default;
};

constexpr Tensor33 operator+(Tensor33 a, const Tensor33& b) { return a += b; }
constexpr Tensor33 operator-(Tensor33 a, const Tensor33& b) { return a -= b; }
constexpr Tensor33 operator-(Tensor33 a) { return a *= -1.0; }
constexpr Tensor33 operator*(double s, Tensor33 a) { return a *= s; }
constexpr Tensor33 operator*(Tensor33 a, double s) { return a *= s; }

constexpr Tensor33 operator*(const Tensor33& a, const Tensor33& b) {
  Tensor33 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

constexpr Vector3 operator*(const Tensor33& a, const Vector3& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
          a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
          a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
}

constexpr Tensor33 transpose(const Tensor33& a) {
  return {a(0, 0), a(1, 0), a(2, 0), a(0, 1), a(1, 1), a(2, 1), a(0, 2), a(1, 2), a(2, 2)};
}

constexpr double trace(const Tensor33& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

constexpr double determinant(const Tensor33& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

/// a ⊗ b, i.e. (a ⊗ b)(i, j) = a_i b_j.
constexpr Tensor33 outer(const Vector3& a, const Vector3& b) {
  Tensor33 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
  return r;
}

/// Full contraction A · B = Σ A_ij B_ij.
constexpr double double_contraction(const Tensor33& a, const Tensor33& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 9; ++i) s += a.c[i] * b.c[i];
  return s;
}

inline double frobenius_norm(const Tensor33& a) { return std::sqrt(double_contraction(a, a)); }

inline bool is_finite(const Tensor33& a) {
  for (double v : a.c)
    if (!std::isfinite(v)) return false;
  return true;
}

constexpr Tensor33 sym_part(const Tensor33& a) { return 0.5 * (a + transpose(a)); }
constexpr Tensor33 skew_part(const Tensor33& a) { return 0.5 * (a - transpose(a)); }

/// Matrix of u ↦ a × u.
constexpr Tensor33 cross_matrix(const Vector3& a) {
  return {0.0, -a[2], a[1], a[2], 0.0, -a[0], -a[1], a[0], 0.0};
}

/// Inverse of cross_matrix. Throws NotAntisymmetric when ‖W + Wᵀ‖ exceeds
/// 1e-12·‖W‖.
Vector3 axial_vector(const Tensor33& w);

/// Inverse; throws SingularTensor when |det| < 1e-12·‖A‖³.
Tensor33 inverse(const Tensor33& a);

/// Rodrigues rotation about a (not necessarily unit) axis; zero axis gives I.
Tensor33 rotation_matrix(const Vector3& axis, double angle);

std::ostream& operator<<(std::ostream& os, const Vector3& v);
std::ostream& operator<<(std::ostream& os, const Tensor33& t);

}  // namespace relpower
