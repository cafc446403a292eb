#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "openmhd/config.hpp"
#include "openmhd/error.hpp"
#include "openmhd/parallel.hpp"
#include "openmhd/runner.hpp"
#include "openmhd/scenarios.hpp"

using namespace openmhd;

namespace {

// A path to an existing file is loaded as JSON; anything else is looked up
// among the built-in scenarios.
ScenarioConfig resolve(const std::string& what, bool override_exponent) {
  if (std::filesystem::exists(what)) return load_config(what, override_exponent);
  ScenarioConfig c = builtin_scenario(what);
  c.override_exponent_check = c.override_exponent_check || override_exponent;
  return c;
}

void print_issues(const Error& e) {
  std::cerr << "error: " << e.what() << '\n';
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
    for (const auto& s : ce->issues()) std::cerr << "  - " << s << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"openmhd: compressible MHD with heat conduction, Picard time windows"};
  app.require_subcommand(1);
  app.fallthrough();

  int threads = 1;
  std::string out;
  bool override_exponent = false;
  app.add_option("--threads", threads, "worker threads for solvers")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory (default $OPENMHD_OUT)");
  app.add_flag("--override-exponent-check", override_exponent, "warn instead of failing on (p, q)");

  std::string target;
  auto* run = app.add_subcommand("run", "run a config file or built-in scenario");
  run->add_option("config", target, "config path or scenario name")->required();

  app.add_subcommand("list-scenarios", "print the built-in scenario names");

  auto* check = app.add_subcommand("check", "validate a config without running it");
  check->add_option("config", target, "config path or scenario name")->required();

  int levels = 3;
  auto* conv = app.add_subcommand("convergence", "refinement study, h and dt halved per level");
  conv->add_option("config", target, "config path or scenario name")->required();
  conv->add_option("--levels", levels, "number of levels")->check(CLI::Range(2, 8));

  auto* dump = app.add_subcommand("dump-config", "print a built-in scenario as JSON");
  dump->add_option("name", target, "scenario name")->required();

  CLI11_PARSE(app, argc, argv);
  set_num_threads(threads);

  try {
    if (app.got_subcommand("list-scenarios")) {
      for (const auto& n : scenario_library()) std::cout << n << '\n';
      return 0;
    }
    if (app.got_subcommand("dump-config")) {
      std::cout << config_to_json(builtin_scenario(target)).dump(2) << '\n';
      return 0;
    }
    ScenarioConfig c = resolve(target, override_exponent);
    if (c.override_exponent_check && !exponent_condition_holds(c.p, c.q, c.material.d_eff)) {
      std::cerr << "warning: exponent condition fails for p = " << c.p << ", q = " << c.q << " (overridden)\n";
    }
    if (app.got_subcommand("check")) {
      validate_config(c);
      std::cout << c.name << ": ok\n";
      return 0;
    }
    if (app.got_subcommand("convergence")) {
      const ConvergenceStudy s = convergence_study(c, levels);
      std::printf("%6s %12s %12s", "nx", "h", "dt");
      for (const auto& e : s.levels.front().errors) std::printf(" %14s %7s", ("L2(" + e.field + ")").c_str(), "order");
      std::printf("\n");
      for (std::size_t k = 0; k < s.levels.size(); ++k) {
        const auto& lv = s.levels[k];
        std::printf("%6d %12.5e %12.5e", lv.nx, lv.h, lv.dt);
        for (std::size_t i = 0; i < lv.errors.size(); ++i) {
          if (k == 0) std::printf(" %14.6e %7s", lv.errors[i].l2_final, "-");
          else std::printf(" %14.6e %7.3f", lv.errors[i].l2_final, s.orders[k - 1][i]);
        }
        std::printf("\n");
      }
      const std::string dir = resolve_output_dir(c, out);
      if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        std::FILE* f = std::fopen((std::filesystem::path(dir) / "convergence.json").string().c_str(), "w");
        if (f != nullptr) {
          std::fputs(to_json(s).dump(2).c_str(), f);
          std::fputs("\n", f);
          std::fclose(f);
        }
      }
      return 0;
    }

    const RunResult r = run_scenario(c, {out, {}});
    const auto& fp = r.fixed_point;
    std::printf("%s: %s, t = %g, %d iterates, %zu windows\n", c.name.c_str(),
                r.converged ? "converged" : "NOT converged", fp.final_time, fp.total_iterates, fp.windows.size());
    if (r.diagnostics) {
      for (const auto& e : r.diagnostics->checks) {
        std::printf("  %-26s %s%s  lhs=%.6e rhs=%.6e\n", e.name.c_str(), e.pass ? "PASS" : "FAIL",
                    e.advisory ? " (advisory)" : "", e.lhs, e.rhs);
      }
    }
    for (const auto& e : r.errors) std::printf("  L2 error %-6s final=%.6e max=%.6e\n", e.field.c_str(), e.l2_final, e.l2_max);
    if (!r.written_to.empty()) std::printf("  report: %s/report.json\n", r.written_to.c_str());
    return r.exit_code;
  } catch (const Error& e) {
    print_issues(e);
    return 1;
  }
}
