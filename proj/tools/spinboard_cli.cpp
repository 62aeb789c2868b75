// Command-line entry point: runs a named suite or a TOML config.

#include "spinboard/runner/config.hpp"
#include "spinboard/runner/suites.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace spinboard::runner;
  CLI::App app{"spinboard: verification suites for coherent-state and reflection-positivity checks"};
  std::string config_path, suite, out;
  std::uint64_t seed = 0;
  int jobs = 0;
  double tol_scale = 0.0;
  bool list = false, dump = false;
  app.add_option("--config", config_path, "TOML run configuration");
  app.add_option("--suite", suite, "named suite preset");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--out", out, "output directory (falls back to SPINBOARD_OUT)");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-scale", tol_scale, "multiply every tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--list-suites", list, "print the suite names and exit");
  app.add_flag("--print-config", dump, "print the resolved configuration as TOML and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    if (list) {
      for (const auto& n : suite_names()) std::cout << n << "\n";
      return 0;
    }
    if (config_path.empty() && suite.empty()) {
      std::cerr << "need --config or --suite\n";
      return 2;
    }
    RunConfig cfg = config_path.empty() ? suite_config(suite) : load_config(config_path);
    if (!config_path.empty() && !suite.empty()) cfg.suite = suite_config(suite).suite;
    if (app.count("--seed")) cfg.seed = seed;
    if (!out.empty()) cfg.out = out;
    if (jobs > 0) cfg.jobs = jobs;
    if (tol_scale > 0.0) cfg.tolerance_scale = tol_scale;
    if (dump) {
      std::cout << to_toml(cfg);
      return 0;
    }
    return run(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
