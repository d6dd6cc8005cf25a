#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pikl/bench.hpp"
#include "pikl/effdim.hpp"

namespace pikl {

using json = nlohmann::json;

/// Walks the document and throws ConfigError if any "precision" or "dtype"
/// entry names something other than 64-bit floating point.
void check_precision(const json& doc);
/// Same check for a single value such as a command-line flag.
void check_precision_value(const std::string& value);

/// "1..10", "3" or "1,4,9".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
/// Either a seed-list string or an array of integers.
std::vector<std::uint64_t> seeds_from_json(const json& j);

/// A number is a constant; otherwise one of {"constant": c},
/// {"power": [c, p]}, {"log_over_n": c}, {"inv_log": c}.
ParamSchedule schedule_from_json(const json& j);
json to_json(const ParamSchedule& s);

SobolevScaling parse_scaling(const std::string& name);
std::string to_string(SobolevScaling scaling);

/// Either a preset name ("identity", "ddx", "harmonic_oscillator", "heat",
/// "convection(beta)", "wave(c2)", "laplace") or a list of
/// {"alpha": [...], "coeff": r}.
LinearDiffOp operator_from_json(const json& j, int d);

/// One-key objects: {"cube": {"d": 2}}, {"ball2d": {}}, {"torus": {"d": 1}},
/// {"scaled": {"factor": a, "domain": ...}},
/// {"translated": {"shift": [...], "domain": ...}},
/// {"union": [...]}, {"product": [left, right]}. Every leaf uses the
/// half-width L of the enclosing problem.
Domain domain_from_json(const json& j, real half_width);

/// Scenario object, optionally starting from {"preset": name}; unknown keys
/// are rejected.
Scenario scenario_from_json(const json& j);
/// Fully resolved form; scenario_from_json reads it back unchanged.
json to_json(const Scenario& sc);

/// Problem description shared by the effective-dimension commands.
struct EffDimConfig {
  std::string name;
  int dim = 1;
  real half_width = pi;
  int s = 1;
  SobolevScaling scaling = SobolevScaling::PerAxis;
  json op = "ddx";
  json domain;
  std::vector<int> ms;
  std::vector<real> ns;
  ParamSchedule lambda{ParamSchedule::Kind::LogOverN, 1.0, 0.0};
  ParamSchedule mu{ParamSchedule::Kind::InvLog, 1.0, 0.0};

  /// GramSpec at mode budget m with (lambda, mu) evaluated at n.
  GramSpec spec(int m, real n) const;
  Schedule schedule() const;
  void validate() const;

  /// ddx and harmonic_oscillator on [-pi, pi] (m = 100), heat_disk on the
  /// unit disk (m = 30); n in {1e2, 1e3, 1e4}.
  static EffDimConfig preset(const std::string& name);
};

EffDimConfig effdim_from_json(const json& j);
json to_json(const EffDimConfig& c);

/// Wave comparison run: PIKL and the classic solvers on one n.
struct WaveConfig {
  long n = 10000;
  real sigma = 0.0;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> methods{"pikl", "euler", "rk4", "cn"};
  int m = 20;
  int s = 2;
  real half_width = 0.5;
  ParamSchedule lambda = ParamSchedule::constant(1e-12);
  ParamSchedule mu = ParamSchedule::constant(1e-7);

  /// Throws ConfigError for unknown method names.
  Scenario scenario() const;
};

WaveConfig wave_from_json(const json& j);
json to_json(const WaveConfig& c);

struct LoadedConfig {
  json config;
  /// Thread count recorded by a manifest; reruns reuse it so that parallel
  /// accumulation happens in the same order.
  std::optional<unsigned> threads;
};

/// Parses a config file or a run manifest (unwrapped to the configuration it
/// recorded). Throws ConfigError naming the path.
LoadedConfig load_config_file(const std::string& path);

}  // namespace pikl
