#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hallmhd/experiments.hpp"
#include "hallmhd/grid.hpp"
#include "hallmhd/littlewood_paley.hpp"
#include "hallmhd/mild_solver.hpp"

namespace hallmhd {

inline const std::vector<std::string> kCommands = {"solve",  "solve-coupled", "solve-local",  "analyze-norms", "verify-identities",
                                                   "decay", "scan-smallness", "kernel-check", "scaling"};

/// Bad configuration text, key or value. what() carries "source:line: message"
/// for file errors and "--set key=value: message" for overrides.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  Grid3 grid;

  // time.*, solver.*
  double T = 1.0;
  int steps = 32;
  int max_iter = 60;
  double tol = 1e-10;
  Quadrature quadrature = Quadrature::trapezoid;
  int etd_order = 2;
  int etd_substeps = 4;
  double jgradj_coefficient = -1.0;
  int bisections = 10;

  // norm.*; s defaults to the critical 3/p - 1 when left unset
  NormSpec norm{NormFamily::besov, -0.5, 6.0, 2.0, kInf};
  bool norm_s_set = false;
  std::string norm_source = "heat";
  bool inequalities = true;
  int suite_n = 16;

  // data.*
  std::string data_profile = "taylor-green";
  double amplitude = 0.05;
  double kcut = 3.0;
  std::uint64_t seed = 1;

  // command specific
  std::vector<double> scan_amplitudes = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
  std::vector<double> scan_final_times = {0.5, 1.0, 2.0};
  int scaling_lambda = 2;
  bool scaling_linear = false;
  DecayProfile decay_profile = DecayProfile::critical;
  double decay_beta = 2.0;
  int decay_samples = 21;
  bool decay_trajectory = false;
  int identity_samples = 1;

  std::filesystem::path out_dir = "out";
  bool snapshots = true;

  SolverConfig solver() const;
  NormSpec norm_spec() const;

  /// Every key with its current value, in table order.
  std::vector<std::pair<std::string, std::string>> echo() const;

  /// Sets one key from its text form. Throws ConfigError (without location)
  /// on an unknown key or a bad value.
  void set(const std::string& key, const std::string& value);

  /// Cross-field checks (grid, ranges, command). Throws ConfigError.
  void validate() const;
};

/// Key names with a one-line description each, in table order.
std::vector<std::pair<std::string, std::string>> config_keys();

/// Parses flat `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Repeated keys take the last value.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::filesystem::path& path);

/// Applies one `key=value` override.
void apply_override(RunConfig& config, const std::string& assignment);

}  // namespace hallmhd
