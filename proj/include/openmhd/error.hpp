#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace openmhd {

enum class ErrorCode {
  AmbiguousInflow,
  DisconnectedInflow,
  EmptyTrajectory,
  MismatchedSampling,
  VelocityNotInterpolable,
  CharacteristicEntersThroughNonInflow,
  NonPositiveData,
  InflowSpeedBelowThreshold,
  LinearSolveDiverged,
  NonPositiveDensityCoefficient,
  DensityFloorViolated,
  NoConvergence,
  CompatibilityViolated,
  ExponentConditionViolated,
  ParseError,
  InvalidArgument,
  UnknownScenario,
  NonFiniteValue,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the category rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Config validation collects every violation before throwing.
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, std::vector<std::string> issues);

  [[nodiscard]] const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

}  // namespace openmhd
