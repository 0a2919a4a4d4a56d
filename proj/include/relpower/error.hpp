#pragma once

#include <stdexcept>
#include <string>

namespace relpower {

enum class ErrorCode {
  NonPositiveJacobian,
  EvaluationOutOfDomain,
  NotAntisymmetric,
  SingularTensor,
  PreconditionViolated,
  NonAffineDefect,
  ConfigInvalid,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying one of the toolkit's error categories.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relpower
