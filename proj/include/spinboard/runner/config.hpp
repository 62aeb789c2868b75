#pragma once
// Run configuration: TOML in and out, suite presets.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinboard::runner {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string suite = "sandwich";
  std::uint64_t seed = 1;
  std::string out;  // empty: SPINBOARD_OUT, then the working directory
  int jobs = 1;
  double tolerance_scale = 1.0;
  std::vector<double> spins{0.5, 1.0, 2.0};
  std::vector<double> betas{1.0};

  // [model]
  int kind = 1;
  double j1 = 0.0;
  double j2 = 0.0;
  int p = 16;
  std::string sign = "plus";

  // [lattice]
  int d = 2;
  int L = 4;
  int B = 2;

  // [mc]
  std::int64_t samples = 1000;
  int burn_in = 400;
  int sweeps = 2000;
  int batches = 32;
  int ti_nodes = 12;

  // [events]
  double kappa = 0.3;
  double b = 0.15;

  // [spinwave]
  double resolution_deg = 1.0;
  std::vector<double> lambdas{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<int> sizes{256, 512};

  // [tolerances] name -> value, scaled by tolerance_scale
  std::map<std::string, double> tolerances;

  bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& suite_names();
// Preset for a named suite; throws ConfigError listing the known names.
RunConfig suite_config(const std::string& name);

RunConfig parse_config(const std::string& toml_text);  // unknown keys are errors
RunConfig load_config(const std::string& path);
std::string to_toml(const RunConfig& config);

// Output directory after applying the SPINBOARD_OUT fallback.
std::string resolve_out_dir(const RunConfig& config);

// Tolerance by name: override from the config if present, else the default;
// either way multiplied by tolerance_scale.
double tolerance(const RunConfig& config, const std::string& name, double fallback);

}  // namespace spinboard::runner
