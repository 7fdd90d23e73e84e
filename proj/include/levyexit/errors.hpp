#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levyexit {

enum class ErrorCode {
  DuplicateRate,
  DegenerateModel,
  NegativeParameter,
  PoleEvaluation,
  RootClassificationAmbiguous,
  MultipleRootDetected,
  DivergentTransform,
  NotDefined,
  SingularBundle,
  NeumannDivergence,
  QuadratureNotConverged,
  MomentExplosion,
  OscillationDetected,
  InvalidContract,
  InvalidParams,
  ModelFileNotFound,
  ContractFileNotFound,
  ParseError,
  UnknownKey,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can emit a machine-readable record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace levyexit
