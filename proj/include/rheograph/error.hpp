#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rheo {

// Machine-readable failure categories.  Every throwing operation in the
// library uses Error with one of these codes so callers (and the CLI) can
// map failures onto exit codes and structured reports without parsing
// message strings.
enum class ErrorCode {
  InvalidParameters,        // model parameters violate a documented invariant
  FamilyNotStressExplicit,  // stress_of_rate called on a family with no single-valued S(D)
  FamilyNotExplicit,        // operation requires an explicit scalar form this family lacks
  NotInvertible,            // rate_of_stress has no (unique) preimage at this stress
  NoConvergence,            // iterative solve exhausted its budget
  FamilyNotSampleable,      // graph sampler has no parametrization for this family
  DegenerateC,              // closed-form profile requested with C == 0
  UnsupportedFluid,         // closed-form channel solution not available for this model
  DomainMismatch,           // input arrays/grids disagree in shape or interval
  SingularJacobian,         // linearized system is singular (e.g. eps == 0 steady solve)
  InvalidAxis,              // sweep axis refers to no known parameter
  InvalidConfig,            // malformed JSON configuration or CLI arguments
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::FamilyNotStressExplicit: return "FamilyNotStressExplicit";
    case ErrorCode::FamilyNotExplicit: return "FamilyNotExplicit";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::FamilyNotSampleable: return "FamilyNotSampleable";
    case ErrorCode::DegenerateC: return "DegenerateC";
    case ErrorCode::UnsupportedFluid: return "UnsupportedFluid";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::InvalidAxis: return "InvalidAxis";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace rheo
