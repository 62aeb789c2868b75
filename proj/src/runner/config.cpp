#include "spinboard/runner/config.hpp"

#include <toml.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <type_traits>

namespace spinboard::runner {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"coherent",     "symbols",      "sandwich", "berezin",
                                              "chessboard-q", "chessboard-c", "frakp",    "contours",
                                              "entropy",      "spinwave",     "scan"};
  return names;
}

RunConfig suite_config(const std::string& name) {
  RunConfig c;
  c.suite = name;
  if (name == "coherent") {
    c.spins.clear();
    for (int two_s = 1; two_s <= 16; ++two_s) c.spins.push_back(0.5 * two_s);
    c.samples = 1000;
  } else if (name == "symbols") {
    c.spins.clear();
    for (int two_s = 1; two_s <= 8; ++two_s) c.spins.push_back(0.5 * two_s);
    c.samples = 100;
  } else if (name == "sandwich") {
    c.spins = {0.5, 1.0, 1.5, 2.0};
    c.samples = 1000;
  } else if (name == "berezin") {
    c.spins = {0.5, 1.0};
    c.betas = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
    c.j1 = 0.5;
    c.j2 = 0.5;
  } else if (name == "chessboard-q") {
    c.spins = {0.5};
    c.betas = {1.0};
    c.d = 1;
    c.L = 4;
    c.B = 1;
    c.samples = 100000;
    c.j1 = 0.5;
    c.j2 = 0.5;
  } else if (name == "chessboard-c") {
    c.betas = {0.0, 1.0, 5.0};
    c.d = 2;
    c.L = 4;
    c.B = 2;
  } else if (name == "frakp") {
    c.betas = {0.0, 1.0, 2.0};
    c.d = 2;
    c.L = 4;
    c.B = 2;
  } else if (name == "contours") {
    c.d = 2;
    c.B = 2;
    c.sizes = {2, 3};  // blocks per side
  } else if (name == "entropy") {
    c.kind = 2;
    c.p = 16;
  } else if (name == "spinwave") {
    c.resolution_deg = 1.0;
    c.sizes = {256, 512};
  } else if (name == "scan") {
    c.L = 16;
    c.B = 2;
    c.sweeps = 1000;
    c.burn_in = 300;
  } else {
    std::string list;
    for (const auto& n : suite_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown suite '" + name + "'; known suites: " + list);
  }
  return c;
}

namespace {

void reject_unknown(const toml::table& t, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [k, v] : t) {
    (void)v;
    if (!known.count(std::string(k.str())))
      throw ConfigError("unknown key '" + std::string(k.str()) + "' in " + where);
  }
}

template <class T>
void read(const toml::table& t, const char* key, T& out) {
  const auto* node = t.get(key);
  if (!node) return;
  if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = node->value<std::string>()) out = *v; else throw ConfigError(std::string(key) + " must be a string");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = node->value<double>()) out = *v; else throw ConfigError(std::string(key) + " must be a number");
  } else {
    if (auto v = node->value<std::int64_t>()) out = static_cast<T>(*v);
    else throw ConfigError(std::string(key) + " must be an integer");
  }
}

template <class T>
void read_array(const toml::table& t, const char* key, std::vector<T>& out) {
  const auto* node = t.get(key);
  if (!node) return;
  const auto* arr = node->as_array();
  if (!arr) throw ConfigError(std::string(key) + " must be an array");
  out.clear();
  for (const auto& e : *arr) {
    std::optional<T> v;
    if constexpr (std::is_floating_point_v<T>) v = e.value<double>();
    else if (auto i = e.value<std::int64_t>()) v = static_cast<T>(*i);
    if (!v) throw ConfigError(std::string(key) + " has an element of the wrong type");
    out.push_back(*v);
  }
}

const toml::table* sub(const toml::table& root, const char* name) {
  const auto* node = root.get(name);
  if (!node) return nullptr;
  const auto* t = node->as_table();
  if (!t) throw ConfigError(std::string(name) + " must be a table");
  return t;
}

template <class T>
toml::array to_array(const std::vector<T>& v) {
  toml::array a;
  for (const auto& x : v) {
    if constexpr (std::is_floating_point_v<T>) a.push_back(x);
    else a.push_back(static_cast<std::int64_t>(x));
  }
  return a;
}

void validate(const RunConfig& c) {
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (!(c.tolerance_scale > 0.0)) throw ConfigError("tolerance_scale must be positive");
  if (c.kind < 1 || c.kind > 5) throw ConfigError("model kind must be 1..5");
  if (c.sign != "plus" && c.sign != "minus") throw ConfigError("sign must be 'plus' or 'minus'");
  if (c.samples < 1 || c.sweeps < 1 || c.batches < 2 || c.ti_nodes < 1 || c.burn_in < 0)
    throw ConfigError("Monte Carlo sizes out of range");
  for (double s : c.spins)
    if (s <= 0.0 || std::abs(2.0 * s - std::round(2.0 * s)) > 1e-12) throw ConfigError("spins must be positive half-integers");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError(std::string("invalid TOML: ") + std::string(e.description()));
  }
  reject_unknown(root,
                 {"suite", "seed", "out", "jobs", "tolerance_scale", "spins", "betas", "model", "lattice", "mc",
                  "events", "spinwave", "tolerances"},
                 "the top level");
  RunConfig c;
  read(root, "suite", c.suite);
  // the preset supplies defaults; explicit keys below override it
  if (root.contains("suite")) c = suite_config(c.suite);
  read(root, "seed", c.seed);
  read(root, "out", c.out);
  read(root, "jobs", c.jobs);
  read(root, "tolerance_scale", c.tolerance_scale);
  read_array(root, "spins", c.spins);
  read_array(root, "betas", c.betas);
  if (const auto* t = sub(root, "model")) {
    reject_unknown(*t, {"kind", "j1", "j2", "p", "sign"}, "[model]");
    read(*t, "kind", c.kind);
    read(*t, "j1", c.j1);
    read(*t, "j2", c.j2);
    read(*t, "p", c.p);
    read(*t, "sign", c.sign);
  }
  if (const auto* t = sub(root, "lattice")) {
    reject_unknown(*t, {"d", "L", "B"}, "[lattice]");
    read(*t, "d", c.d);
    read(*t, "L", c.L);
    read(*t, "B", c.B);
  }
  if (const auto* t = sub(root, "mc")) {
    reject_unknown(*t, {"samples", "burn_in", "sweeps", "batches", "ti_nodes"}, "[mc]");
    read(*t, "samples", c.samples);
    read(*t, "burn_in", c.burn_in);
    read(*t, "sweeps", c.sweeps);
    read(*t, "batches", c.batches);
    read(*t, "ti_nodes", c.ti_nodes);
  }
  if (const auto* t = sub(root, "events")) {
    reject_unknown(*t, {"kappa", "b"}, "[events]");
    read(*t, "kappa", c.kappa);
    read(*t, "b", c.b);
  }
  if (const auto* t = sub(root, "spinwave")) {
    reject_unknown(*t, {"resolution_deg", "lambdas", "sizes"}, "[spinwave]");
    read(*t, "resolution_deg", c.resolution_deg);
    read_array(*t, "lambdas", c.lambdas);
    read_array(*t, "sizes", c.sizes);
  }
  if (const auto* t = sub(root, "tolerances")) {
    c.tolerances.clear();
    for (const auto& [k, v] : *t) {
      auto x = v.value<double>();
      if (!x) throw ConfigError("tolerance '" + std::string(k.str()) + "' must be a number");
      c.tolerances[std::string(k.str())] = *x;
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_toml(const RunConfig& c) {
  toml::table root;
  root.insert("suite", c.suite);
  root.insert("seed", static_cast<std::int64_t>(c.seed));
  root.insert("out", c.out);
  root.insert("jobs", c.jobs);
  root.insert("tolerance_scale", c.tolerance_scale);
  root.insert("spins", to_array(c.spins));
  root.insert("betas", to_array(c.betas));
  root.insert("model", toml::table{{"kind", c.kind}, {"j1", c.j1}, {"j2", c.j2}, {"p", c.p}, {"sign", c.sign}});
  root.insert("lattice", toml::table{{"d", c.d}, {"L", c.L}, {"B", c.B}});
  root.insert("mc", toml::table{{"samples", c.samples},
                                {"burn_in", c.burn_in},
                                {"sweeps", c.sweeps},
                                {"batches", c.batches},
                                {"ti_nodes", c.ti_nodes}});
  root.insert("events", toml::table{{"kappa", c.kappa}, {"b", c.b}});
  root.insert("spinwave", toml::table{{"resolution_deg", c.resolution_deg},
                                      {"lambdas", to_array(c.lambdas)},
                                      {"sizes", to_array(c.sizes)}});
  toml::table tol;
  for (const auto& [k, v] : c.tolerances) tol.insert(k, v);
  root.insert("tolerances", std::move(tol));
  std::stringstream ss;
  ss << root << "\n";
  return ss.str();
}

std::string resolve_out_dir(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("SPINBOARD_OUT"); env && *env) return env;
  return ".";
}

double tolerance(const RunConfig& c, const std::string& name, double fallback) {
  auto it = c.tolerances.find(name);
  return (it == c.tolerances.end() ? fallback : it->second) * c.tolerance_scale;
}

}  // namespace spinboard::runner
