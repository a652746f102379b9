#include "unishear/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "unishear/errors.hpp"

namespace unishear {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects true or false, got '" + v + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define INT_KEY(name, field) \
  Key{name, [](RunConfig& c, const std::string& v) { c.field = to_int(name, v); }, [](const RunConfig& c) { return std::to_string(c.field); }}
#define DBL_KEY(name, field) \
  Key{name, [](RunConfig& c, const std::string& v) { c.field = to_double(name, v); }, [](const RunConfig& c) { return fmt(c.field); }}
#define BOOL_KEY(name, field) \
  Key{name, [](RunConfig& c, const std::string& v) { c.field = to_bool(name, v); }, [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }}
#define STR_KEY(name, field) \
  Key{name, [](RunConfig& c, const std::string& v) { c.field = v; }, [](const RunConfig& c) { return c.field; }}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      INT_KEY("N", N),
      INT_KEY("J", J),
      STR_KEY("preset", preset),
      INT_KEY("j", j),
      DBL_KEY("rho", weight.rho),
      DBL_KEY("amplitude", weight.amplitude),
      STR_KEY("profile", weight.profile),
      DBL_KEY("h", h),
      STR_KEY("mask", mask),
      Key{"solver", [](RunConfig& c, const std::string& v) { c.solver.method = parse_solver_method(v); },
          [](const RunConfig& c) { return std::string(solver_method_name(c.solver.method)); }},
      INT_KEY("max_iters", solver.max_iters),
      DBL_KEY("lambda_max", solver.lambda_max),
      DBL_KEY("lambda_min", solver.lambda_min),
      DBL_KEY("lambda_min_ratio", solver.lambda_min_ratio),
      DBL_KEY("decay", solver.decay),
      DBL_KEY("penalty", solver.penalty),
      DBL_KEY("tol", solver.tol),
      DBL_KEY("dual_tol", solver.dual_tol),
      DBL_KEY("beta", beta),
      DBL_KEY("beta_quantile", beta_quantile),
      BOOL_KEY("cone_restricted", cone_restricted),
      DBL_KEY("epsilon", epsilon),
      DBL_KEY("probe_radius", probe_radius),
      BOOL_KEY("neighbor", neighbor),
      INT_KEY("j_min", j_min),
      INT_KEY("j_max", j_max),
      DBL_KEY("epsilon_gap", epsilon_gap),
      DBL_KEY("gap_c", gap_c),
      DBL_KEY("h1_pixels", h1_pixels),
      BOOL_KEY("coherence", coherence),
      STR_KEY("presets", presets),
      STR_KEY("input", input),
      STR_KEY("reference", reference),
      STR_KEY("output", output),
  };
  return k;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const Key& k : keys()) n.push_back(k.name);
    return n;
  }();
  return names;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const Key& k : keys())
    if (k.name == key) {
      k.set(cfg, trim(value));
      cfg.explicit_keys.push_back(key);
      return;
    }
  throw ConfigError("unknown configuration key '" + key + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  RunConfig cfg;
  apply_config_text(cfg, ss.str());
  return cfg;
}

std::string render_config(const RunConfig& cfg) {
  std::string out;
  for (const Key& k : keys()) out += k.name + "=" + k.get(cfg) + "\n";
  return out;
}

bool RunConfig::is_set(const std::string& key) const {
  return std::find(explicit_keys.begin(), explicit_keys.end(), key) != explicit_keys.end();
}

ScalingSequence RunConfig::sequence() const { return parse_preset(preset, J); }

std::vector<std::string> RunConfig::preset_list() const {
  std::vector<std::string> out;
  std::istringstream is(presets);
  std::string item;
  while (std::getline(is, item, ';'))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

void RunConfig::validate() const {
  FrequencyGrid::make(N, J);
  (void)sequence();
  for (const auto& p : preset_list()) (void)parse_preset(p, J);
  weight.validate();
  solver.validate();
  if (h < 0.0 || h > 0.5) throw ConfigError("h must lie in [0, 1/2]");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(epsilon_gap > 0.0)) throw ConfigError("epsilon_gap must be > 0");
  if (gap_c < 0.0) throw ConfigError("gap_c must be >= 0");
  if (!(h1_pixels > 0.0)) throw ConfigError("h1_pixels must be > 0");
  if (!(probe_radius > 0.0)) throw ConfigError("probe_radius must be > 0");
  if (beta_quantile > 1.0) throw ConfigError("beta_quantile must lie in [0, 1]");
  if (output.empty()) throw ConfigError("output directory must not be empty");
}

void RunConfig::validate_scale() const {
  if (j < 0 || j >= J) throw ConfigError("j must lie in 0..J-1");
}

}  // namespace unishear
