#pragma once

#include <string>
#include <vector>

#include "openmhd/config.hpp"

namespace openmhd {

/// Names of the built-in scenarios, sorted.
std::vector<std::string> scenario_library();

/// Built-in scenario by name. Throws UnknownScenario.
ScenarioConfig builtin_scenario(const std::string& name);

}  // namespace openmhd
