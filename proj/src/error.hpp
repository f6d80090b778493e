#pragma once

#include <stdexcept>
#include <string>

namespace wci {

enum class ErrorCode {
  InvalidArgument = 1,
  Config = 2,
  StepUnderflow = 3,
  VerificationFailed = 4,
  NoConvergence = 5,
  Domain = 6,
  BasinUndetermined = 7,
  EmptyPostTransient = 8,
  Io = 9,
  ConditionViolated = 10,
};

const char *error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Failure tied to a point in simulated time (step underflow, undefined jump).
class TimedError : public Error {
 public:
  TimedError(ErrorCode code, double t, const std::string &what)
      : Error(code, what), t_(t) {}

  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace wci
