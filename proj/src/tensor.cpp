#include "relpower/tensor.hpp"

#include "relpower/error.hpp"

#include <sstream>

namespace relpower {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveJacobian: return "NonPositiveJacobian";
    case ErrorCode::EvaluationOutOfDomain: return "EvaluationOutOfDomain";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::SingularTensor: return "SingularTensor";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NonAffineDefect: return "NonAffineDefect";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Vector3 axial_vector(const Tensor33& w) {
  const double scale = frobenius_norm(w);
  if (frobenius_norm(w + transpose(w)) > 1e-12 * scale) {
    std::ostringstream os;
    os << "tensor is not antisymmetric: " << w;
    throw Error(ErrorCode::NotAntisymmetric, os.str());
  }
  // Average the two partner entries so rounding-level asymmetry is split evenly.
  return {0.5 * (w(2, 1) - w(1, 2)), 0.5 * (w(0, 2) - w(2, 0)), 0.5 * (w(1, 0) - w(0, 1))};
}

Tensor33 inverse(const Tensor33& a) {
  const double det = determinant(a);
  const double scale = frobenius_norm(a);
  if (!(std::abs(det) >= 1e-12 * scale * scale * scale) || det == 0.0) {
    std::ostringstream os;
    os << "determinant " << det << " below singularity threshold";
    throw Error(ErrorCode::SingularTensor, os.str());
  }
  const double inv = 1.0 / det;
  Tensor33 r;
  r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) * inv;
  r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) * inv;
  r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * inv;
  r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) * inv;
  r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) * inv;
  r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) * inv;
  r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) * inv;
  r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) * inv;
  r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) * inv;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Vector3& v) {
  return os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ')';
}

std::ostream& operator<<(std::ostream& os, const Tensor33& t) {
  os << '[';
  for (std::size_t i = 0; i < 3; ++i) {
    os << (i ? ", " : "") << '[' << t(i, 0) << ", " << t(i, 1) << ", " << t(i, 2) << ']';
  }
  return os << ']';
}

Tensor33 rotation_matrix(const Vector3& axis, double angle) {
  const double n = norm(axis);
  if (n == 0.0) return Tensor33::identity();
  const Tensor33 k = cross_matrix(axis / n);
  return Tensor33::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

}  // namespace relpower
