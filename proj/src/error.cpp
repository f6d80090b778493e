#include "error.hpp"

namespace wci {

const char *error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::BasinUndetermined: return "BasinUndetermined";
    case ErrorCode::EmptyPostTransient: return "EmptyPostTransient";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
  }
  return "Unknown";
}

}  // namespace wci
