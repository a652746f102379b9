#pragma once

#include <map>
#include <string>
#include <vector>

#include "unishear/model.hpp"
#include "unishear/recover.hpp"
#include "unishear/system.hpp"

namespace unishear {

// Flat key=value run configuration. Every key has a default; unknown keys
// and malformed values raise ConfigError.
struct RunConfig {
  // Grid and system.
  int N = 512;
  int J = 6;
  std::string preset = "parabolic";
  // Model.
  int j = 1;
  WeightSpec weight;
  // Mask: half-width h (continuum units) or a mask image path.
  double h = 0.0;
  std::string mask;
  // Solver.
  SolverConfig solver;
  // One-step thresholding: beta, or a quantile of the coefficient moduli.
  double beta = -1.0;
  double beta_quantile = -1.0;
  bool cone_restricted = false;
  // Diagnostics.
  double epsilon = 0.1;
  double probe_radius = 1.0;
  bool neighbor = true;
  // Sweep: h_j = gap_c 2^{-(alpha_j + epsilon_gap) j}; gap_c = 0 means
  // h_1 = h1_pixels / N.
  int j_min = 1;
  int j_max = 4;
  double epsilon_gap = 0.2;
  double gap_c = 0.0;
  double h1_pixels = 8.0;
  bool coherence = true;
  // Preset list for compare, separated by ';'.
  std::string presets = "alpha:0.5;parabolic;wavelet";
  // Files.
  std::string input;
  std::string reference;
  std::string output = ".";
  // Keys assigned explicitly, in order of assignment.
  std::vector<std::string> explicit_keys;
  bool is_set(const std::string& key) const;

  ScalingSequence sequence() const;
  std::vector<std::string> preset_list() const;
  // Throws ConfigError (or the system errors) on invalid combinations.
  void validate() const;
  // The model scale j; checked only by commands that build a model.
  void validate_scale() const;
};

// Names of all recognised keys, in a stable order.
const std::vector<std::string>& config_keys();
// Set one key from its text value.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
// Parse "key = value" lines; '#' starts a comment, blank lines are skipped.
void apply_config_text(RunConfig& cfg, const std::string& text);
RunConfig load_config_file(const std::string& path);
// Canonical key=value rendering of every key.
std::string render_config(const RunConfig& cfg);

}  // namespace unishear
