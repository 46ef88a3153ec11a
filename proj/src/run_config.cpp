#include "hallmhd/run_config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "hallmhd/csv.hpp"

namespace hallmhd {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  const std::string t = trim(v);
  if (t.empty()) throw ConfigError("expected a number");
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || std::isnan(x))
    throw ConfigError("'" + t + "' is not a number");
  return x;
}

template <class Int>
Int to_int(const std::string& v) {
  const std::string t = trim(v);
  Int x{};
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc{} || p != t.data() + t.size())
    throw ConfigError("'" + t + "' is not an integer");
  return x;
}

bool to_bool(const std::string& v) {
  const std::string t = trim(v);
  if (t == "true") return true;
  if (t == "false") return false;
  throw ConfigError("'" + t + "' is not true or false");
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item));
  if (out.empty()) throw ConfigError("expected a comma-separated list of numbers");
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string decay_profile_text(DecayProfile p) { return p == DecayProfile::critical ? "critical" : "custom"; }

template <class F>
auto rethrow_as_config(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

struct Key {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& key_table() {
  static const std::vector<Key> table = {
      {"command", "one of the hallmhd commands",
       [](RunConfig& c, const std::string& v) { c.command = trim(v); }, [](const RunConfig& c) { return c.command; }},
      {"grid.n", "samples per axis (power of two >= 4)",
       [](RunConfig& c, const std::string& v) { c.grid.n = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.grid.n); }},
      {"grid.box", "periodic box length",
       [](RunConfig& c, const std::string& v) { c.grid.box_length = to_double(v); },
       [](const RunConfig& c) { return format_double(c.grid.box_length); }},
      {"grid.dealias", "fraction of n/2 kept by the dealiasing cutoff",
       [](RunConfig& c, const std::string& v) { c.grid.dealias_fraction = to_double(v); },
       [](const RunConfig& c) { return format_double(c.grid.dealias_fraction); }},
      {"time.T", "final time", [](RunConfig& c, const std::string& v) { c.T = to_double(v); },
       [](const RunConfig& c) { return format_double(c.T); }},
      {"time.steps", "stored time steps", [](RunConfig& c, const std::string& v) { c.steps = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.steps); }},
      {"solver.max_iter", "iteration cap", [](RunConfig& c, const std::string& v) { c.max_iter = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.max_iter); }},
      {"solver.tol", "relative update tolerance", [](RunConfig& c, const std::string& v) { c.tol = to_double(v); },
       [](const RunConfig& c) { return format_double(c.tol); }},
      {"solver.quadrature", "trapezoid or left-endpoint",
       [](RunConfig& c, const std::string& v) { c.quadrature = rethrow_as_config([&] { return parse_quadrature(trim(v)); }); },
       [](const RunConfig& c) { return to_string(c.quadrature); }},
      {"solver.etd_order", "1 or 2", [](RunConfig& c, const std::string& v) { c.etd_order = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.etd_order); }},
      {"solver.etd_substeps", "oracle steps per stored step",
       [](RunConfig& c, const std::string& v) { c.etd_substeps = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.etd_substeps); }},
      {"solver.jgradj", "coefficient of the J.grad J term in the J row",
       [](RunConfig& c, const std::string& v) { c.jgradj_coefficient = to_double(v); },
       [](const RunConfig& c) { return format_double(c.jgradj_coefficient); }},
      {"solver.bisections", "largest number of T halvings for solve-local",
       [](RunConfig& c, const std::string& v) { c.bisections = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.bisections); }},
      {"norm.family", "besov, chemin_lerner, kato, kato_herz, fourier_herz or lp_hat",
       [](RunConfig& c, const std::string& v) {
         c.norm.family = rethrow_as_config([&] { return parse_norm_family(trim(v)); });
       },
       [](const RunConfig& c) { return to_string(c.norm.family); }},
      {"norm.s", "regularity (sigma for the Kato families); default 3/p - 1",
       [](RunConfig& c, const std::string& v) {
         c.norm.s = to_double(v);
         c.norm_s_set = true;
       },
       [](const RunConfig& c) { return format_double(c.norm_spec().s); }},
      {"norm.p", "integrability in [1, inf]", [](RunConfig& c, const std::string& v) { c.norm.p = to_double(v); },
       [](const RunConfig& c) { return format_double(c.norm.p); }},
      {"norm.r", "summability in [1, inf]", [](RunConfig& c, const std::string& v) { c.norm.r = to_double(v); },
       [](const RunConfig& c) { return format_double(c.norm.r); }},
      {"norm.rho", "time exponent in [1, inf]", [](RunConfig& c, const std::string& v) { c.norm.rho = to_double(v); },
       [](const RunConfig& c) { return format_double(c.norm.rho); }},
      {"norm.source", "trajectory for time norms: heat or solve",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t != "heat" && t != "solve") throw ConfigError("norm.source must be heat or solve");
         c.norm_source = t;
       },
       [](const RunConfig& c) { return c.norm_source; }},
      {"norm.inequalities", "run the inequality suite in analyze-norms",
       [](RunConfig& c, const std::string& v) { c.inequalities = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.inequalities); }},
      {"norm.suite_n", "grid size of the inequality suite",
       [](RunConfig& c, const std::string& v) { c.suite_n = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.suite_n); }},
      {"data.profile", "taylor-green or random",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t != "taylor-green" && t != "random") throw ConfigError("data.profile must be taylor-green or random");
         c.data_profile = t;
       },
       [](const RunConfig& c) { return c.data_profile; }},
      {"data.amplitude", "peak value (taylor-green) or RMS (random)",
       [](RunConfig& c, const std::string& v) { c.amplitude = to_double(v); },
       [](const RunConfig& c) { return format_double(c.amplitude); }},
      {"data.kcut", "lattice radius of random data", [](RunConfig& c, const std::string& v) { c.kcut = to_double(v); },
       [](const RunConfig& c) { return format_double(c.kcut); }},
      {"seed", "seed for random fields",
       [](RunConfig& c, const std::string& v) { c.seed = to_int<std::uint64_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"scan.amplitudes", "increasing amplitude ladder",
       [](RunConfig& c, const std::string& v) { c.scan_amplitudes = to_list(v); },
       [](const RunConfig& c) { return list_text(c.scan_amplitudes); }},
      {"scan.final_times", "final times of the coupled scans",
       [](RunConfig& c, const std::string& v) { c.scan_final_times = to_list(v); },
       [](const RunConfig& c) { return list_text(c.scan_final_times); }},
      {"scaling.lambda", "integer scale factor >= 2",
       [](RunConfig& c, const std::string& v) { c.scaling_lambda = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.scaling_lambda); }},
      {"scaling.linear", "compare heat flows only",
       [](RunConfig& c, const std::string& v) { c.scaling_linear = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.scaling_linear); }},
      {"decay.profile", "critical or custom",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "critical") c.decay_profile = DecayProfile::critical;
         else if (t == "custom") c.decay_profile = DecayProfile::custom;
         else throw ConfigError("decay.profile must be critical or custom");
       },
       [](const RunConfig& c) { return decay_profile_text(c.decay_profile); }},
      {"decay.beta", "exponent of the custom profile |xi|^-beta",
       [](RunConfig& c, const std::string& v) { c.decay_beta = to_double(v); },
       [](const RunConfig& c) { return format_double(c.decay_beta); }},
      {"decay.samples", "log-spaced times in [1, 100]",
       [](RunConfig& c, const std::string& v) { c.decay_samples = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.decay_samples); }},
      {"decay.trajectory", "also fit the slope on a solver trajectory",
       [](RunConfig& c, const std::string& v) { c.decay_trajectory = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.decay_trajectory); }},
      {"identities.samples", "random field pairs for verify-identities",
       [](RunConfig& c, const std::string& v) { c.identity_samples = to_int<int>(v); },
       [](const RunConfig& c) { return std::to_string(c.identity_samples); }},
      {"io.out_dir", "artifact directory", [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); },
       [](const RunConfig& c) { return c.out_dir.string(); }},
      {"io.snapshots", "write HMHD1 trajectories from the solve commands",
       [](RunConfig& c, const std::string& v) { c.snapshots = to_bool(v); },
       [](const RunConfig& c) { return bool_text(c.snapshots); }},
  };
  return table;
}

}  // namespace

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.T = T;
  s.steps = steps;
  s.max_iter = max_iter;
  s.tol = tol;
  s.quadrature = quadrature;
  s.etd_order = etd_order;
  s.etd_substeps = etd_substeps;
  s.nonlinear.jgradj_coefficient = jgradj_coefficient;
  return s;
}

NormSpec RunConfig::norm_spec() const {
  NormSpec n = norm;
  if (!norm_s_set) n.s = std::isinf(n.p) ? -1.0 : 3.0 / n.p - 1.0;
  return n;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : key_table()) out.emplace_back(k.name, k.get(*this));
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& t = key_table();
  const auto it = std::find_if(t.begin(), t.end(), [&](const Key& k) { return k.name == key; });
  if (it == t.end()) throw ConfigError("unknown key '" + key + "'");
  try {
    it->set(*this, value);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (command.empty()) fail("no command given");
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    fail("unknown command '" + command + "'");
  rethrow_as_config([&] { grid.validate(); return 0; });
  const bool solves = command == "solve" || command == "solve-coupled" || command == "solve-local" ||
                      command == "scaling" || command == "scan-smallness" ||
                      (command == "analyze-norms" && is_time_family(norm.family) && norm_source == "solve") ||
                      (command == "decay" && decay_trajectory);
  if (solves) rethrow_as_config([&] { solver().validate(grid); return 0; });
  if (command == "scan-smallness")
    for (double t : scan_final_times) {
      SolverConfig s = solver();
      s.T = t;
      rethrow_as_config([&] { s.validate(grid); return 0; });
    }
  rethrow_as_config([&] { norm_spec().validate(); return 0; });
  if (bisections < 0) fail("solver.bisections must be >= 0");
  if (!(amplitude >= 0.0) || std::isinf(amplitude)) fail("data.amplitude must be finite and >= 0");
  if (!(kcut >= 1.0)) fail("data.kcut must be >= 1");
  if (suite_n < 8) fail("norm.suite_n must be >= 8");
  for (std::size_t i = 1; i < scan_amplitudes.size(); ++i)
    if (!(scan_amplitudes[i] > scan_amplitudes[i - 1])) fail("scan.amplitudes must increase");
  for (double t : scan_final_times)
    if (!(t > 0.0) || std::isinf(t)) fail("scan.final_times must be positive");
  if (scaling_lambda < 2) fail("scaling.lambda must be an integer >= 2");
  if (grid.n % scaling_lambda != 0 && command == "scaling") fail("scaling.lambda must divide grid.n");
  if (decay_samples < 3) fail("decay.samples must be >= 3");
  if (identity_samples < 1) fail("identities.samples must be >= 1");
  if (out_dir.empty()) fail("io.out_dir is empty");
}

std::vector<std::pair<std::string, std::string>> config_keys() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : key_table()) out.emplace_back(k.name, k.help);
  return out;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "missing key");
    try {
      c.set(key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected key=value");
  try {
    config.set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
  } catch (const ConfigError& e) {
    throw ConfigError("--set " + assignment + ": " + e.what());
  }
}

}  // namespace hallmhd
