#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "openmhd/config.hpp"
#include "openmhd/error.hpp"
#include "openmhd/scenarios.hpp"

using namespace openmhd;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "openmhd_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("exponent condition") {
  CHECK(exponent_condition_holds(4.0, 4.0, 3));
  // 2q/(q-1) = 8/3 > 2.
  CHECK_FALSE(exponent_condition_holds(2.0, 4.0, 3));
  // q must exceed d.
  CHECK_FALSE(exponent_condition_holds(10.0, 3.0, 3));
  CHECK(exponent_condition_holds(3.0, 4.0, 2));
}

TEST_CASE("minimal stationary config loads") {
  const auto path = scratch("minimal.json");
  {
    std::ofstream out(path);
    out << R"({"name": "minimal", "grid": {"nx": 8, "ny": 8}, "time": {"horizon": 0.01, "dt": 0.005, "window": 0.01}})";
  }
  const ScenarioConfig c = load_config(path.string());
  CHECK(c.name == "minimal");
  CHECK(c.grid.nx == 8);
  CHECK(c.time.dt == 0.005);
  CHECK(c.p == 4.0);
}

TEST_CASE("every built-in scenario round-trips through JSON and files") {
  for (const auto& name : scenario_library()) {
    CAPTURE(name);
    const ScenarioConfig c = builtin_scenario(name);
    CHECK(config_from_json(config_to_json(c)) == c);
    const auto path = scratch(name + ".json");
    write_config(c, path.string());
    CHECK(load_config(path.string()) == c);
  }
}

TEST_CASE("p = 2, q = 4 violates the exponent condition") {
  ScenarioConfig c = builtin_scenario("stationary");
  c.p = 2.0;
  c.q = 4.0;
  try {
    validate_config(c);
    FAIL("expected ExponentConditionViolated");
  } catch (const ConfigError& e) {
    CHECK(e.code() == ErrorCode::ExponentConditionViolated);
  }
  c.override_exponent_check = true;
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("incompatible inflow density names the condition") {
  ScenarioConfig c = builtin_scenario("translation-inflow");
  c.data.rho0 = ScalarProfile::constant(2.0);
  c.data.theta0 = ScalarProfile::constant(3.0);
  try {
    validate_config(c);
    FAIL("expected CompatibilityViolated");
  } catch (const ConfigError& e) {
    CHECK(e.code() == ErrorCode::CompatibilityViolated);
    bool rho = false;
    bool theta = false;
    for (const auto& s : e.issues()) {
      rho = rho || s.find("rho0 = rho_B(0)") != std::string::npos;
      theta = theta || s.find("theta0 = theta_B(0)") != std::string::npos;
    }
    // Both violations are reported together.
    CHECK(rho);
    CHECK(theta);
  }
}

TEST_CASE("range violations are collected") {
  ScenarioConfig c = builtin_scenario("stationary");
  c.time.dt = -1.0;
  c.material.kappa = 0.0;
  try {
    validate_config(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.issues().size() >= 2);
  }
}

TEST_CASE("parse errors") {
  nlohmann::json j = config_to_json(builtin_scenario("stationary"));
  j["grid"]["bogus"] = 1;
  try {
    (void)config_from_json(j);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
  const auto path = scratch("broken.json");
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  try {
    (void)load_config(path.string());
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
  try {
    (void)load_config((std::filesystem::temp_directory_path() / "openmhd_unit" / "missing.json").string());
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}
