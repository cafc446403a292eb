#include "openmhd/error.hpp"

namespace openmhd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AmbiguousInflow: return "AmbiguousInflow";
    case ErrorCode::DisconnectedInflow: return "DisconnectedInflow";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::MismatchedSampling: return "MismatchedSampling";
    case ErrorCode::VelocityNotInterpolable: return "VelocityNotInterpolable";
    case ErrorCode::CharacteristicEntersThroughNonInflow: return "CharacteristicEntersThroughNonInflow";
    case ErrorCode::NonPositiveData: return "NonPositiveData";
    case ErrorCode::InflowSpeedBelowThreshold: return "InflowSpeedBelowThreshold";
    case ErrorCode::LinearSolveDiverged: return "LinearSolveDiverged";
    case ErrorCode::NonPositiveDensityCoefficient: return "NonPositiveDensityCoefficient";
    case ErrorCode::DensityFloorViolated: return "DensityFloorViolated";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CompatibilityViolated: return "CompatibilityViolated";
    case ErrorCode::ExponentConditionViolated: return "ExponentConditionViolated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
  }
  return "Unknown";
}

namespace {
std::string join_issues(const std::vector<std::string>& issues) {
  std::string out;
  for (const auto& s : issues) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}
}  // namespace

ConfigError::ConfigError(ErrorCode code, std::vector<std::string> issues)
    : Error(code, join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace openmhd
