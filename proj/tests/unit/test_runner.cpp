#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "openmhd/error.hpp"
#include "openmhd/field_io.hpp"
#include "openmhd/runner.hpp"
#include "openmhd/scenarios.hpp"

using namespace openmhd;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "openmhd_unit" / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenario library") {
  const auto names = scenario_library();
  CHECK(std::is_sorted(names.begin(), names.end()));
  for (const char* n : {"stationary", "uniform-divergence", "translation-inflow", "joule-box", "inflow-channel",
                        "manufactured-full"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  for (const auto& n : names) {
    CAPTURE(n);
    const ScenarioConfig c = builtin_scenario(n);
    CHECK(c.name == n);
    CHECK_NOTHROW(validate_config(c));
  }
  for (const char* bad : {"", "no-such-scenario"}) {
    try {
      (void)builtin_scenario(bad);
      FAIL("expected UnknownScenario");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownScenario);
    }
  }
}

TEST_CASE("stationary run writes a report and constant dumps") {
  ScenarioConfig c = builtin_scenario("stationary");
  c.grid.nx = c.grid.ny = 8;
  c.time.horizon = c.time.window = 0.01;
  c.time.dt = 2e-3;
  c.output.cadence = 2;
  const auto dir = fresh_dir("stationary");
  const RunResult r = run_scenario(c, {dir.string(), {}});
  CHECK(r.exit_code == 0);
  CHECK(r.converged);
  CHECK(r.written_to == dir.string());
  REQUIRE(std::filesystem::exists(dir / "report.json"));
  std::ifstream in(dir / "report.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  for (const char* k : {"scenario", "config", "fixed_point", "diagnostics", "errors", "converged", "exit_code"})
    CHECK(j.contains(k));
  CHECK(j["exit_code"] == 0);
  int dumps = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "fields")) {
    std::ifstream f(e.path());
    const FieldDump d = read_field(f);
    for (const auto& comp : d.components) CHECK(comp.max() - comp.min() < 1e-9);
    ++dumps;
  }
  // Steps 0, 2 and 4 plus the final state, four fields each.
  CHECK(dumps == 16);
  for (const auto& e : r.errors) CHECK(e.l2_max < 1e-9);
}

TEST_CASE("output directory resolution") {
  ScenarioConfig c = builtin_scenario("stationary");
  c.output.dir = "from-config";
  ::unsetenv("OPENMHD_OUT");
  CHECK(resolve_output_dir(c, "") == "from-config");
  ::setenv("OPENMHD_OUT", "from-env", 1);
  CHECK(resolve_output_dir(c, "") == "from-env");
  CHECK(resolve_output_dir(c, "explicit") == "explicit");
  ::unsetenv("OPENMHD_OUT");
}

TEST_CASE("NoConvergence exits 2 and still writes the report") {
  ScenarioConfig c = builtin_scenario("inflow-channel");
  c.grid.nx = c.grid.ny = 12;
  c.time.dt = 0.25;
  c.time.window = 0.5;
  c.time.horizon = 0.5;
  c.fixed_point.max_shrinks = 0;
  c.fixed_point.max_iter = 2;
  const auto dir = fresh_dir("noconv");
  const RunResult r = run_scenario(c, {dir.string(), {}});
  CHECK(r.exit_code == 2);
  CHECK_FALSE(r.converged);
  REQUIRE(std::filesystem::exists(dir / "report.json"));
  std::ifstream in(dir / "report.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j["converged"] == false);
  CHECK(j["exit_code"] == 2);
}

TEST_CASE("invalid configs are rejected before running") {
  ScenarioConfig c = builtin_scenario("stationary");
  c.p = 2.0;
  CHECK_THROWS_AS(run_scenario(c, {}), ConfigError);
}

TEST_CASE("convergence study halves h and dt") {
  ScenarioConfig c = builtin_scenario("translation-inflow");
  c.grid.nx = c.grid.ny = 8;
  c.time.dt = 8e-3;
  c.time.horizon = c.time.window = 0.256;
  const ConvergenceStudy s = convergence_study(c, 2);
  REQUIRE(s.levels.size() == 2);
  CHECK(s.levels[1].nx == 16);
  CHECK(s.levels[1].dt == doctest::Approx(4e-3));
  REQUIRE(s.orders.size() == 1);
  CHECK(s.levels[1].errors.front().l2_final < s.levels[0].errors.front().l2_final);
  const nlohmann::json j = to_json(s);
  CHECK(j.contains("levels"));
}
