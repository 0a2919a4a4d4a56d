#pragma once

#include "relpower/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace testing {

using relpower::Tensor33;
using relpower::Vector3;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Vector3 random_vector(double scale = 1.0) {
  return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
}

inline Tensor33 random_tensor(double scale = 1.0) {
  Tensor33 t;
  for (double& v : t.c) v = uniform(-scale, scale);
  return t;
}

/// det F in [0.5, 2].
inline Tensor33 random_gradient() {
  for (;;) {
    const Tensor33 f = Tensor33::identity() + random_tensor(0.35);
    const double j = relpower::determinant(f);
    if (j >= 0.5 && j <= 2.0) return f;
  }
}

inline Tensor33 random_rotation() {
  return relpower::rotation_matrix(random_vector(), uniform(-3.0, 3.0));
}

inline double max_abs(const Tensor33& t) {
  double m = 0.0;
  for (double v : t.c) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs(const Vector3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

}  // namespace testing
