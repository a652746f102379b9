#pragma once

#include <string>
#include <utility>
#include <vector>

#include "unishear/config.hpp"
#include "unishear/diagnostics.hpp"
#include "unishear/io.hpp"
#include "unishear/model.hpp"
#include "unishear/recover.hpp"
#include "unishear/system.hpp"

namespace unishear {

// Per-scale inpainting experiment with gap law h_j = c 2^{-(alpha_j + epsilon_gap) j}.
struct SweepConfig {
  std::string preset = "parabolic";
  int N = 512;
  int J = 6;
  int j_min = 1;
  int j_max = 4;
  double epsilon = 0.1;      // cluster tube exponent
  double epsilon_gap = 0.2;  // gap law exponent
  double gap_c = 0.0;        // 0: chosen so that h_1 = h1_pixels / N
  double h1_pixels = 8.0;
  // Preset whose alpha_j enter the gap law; empty means `preset`. Setting it
  // gives several presets one absolute gap sequence.
  std::string gap_preset;
  WeightSpec weight;
  SolverConfig solver = [] {
    SolverConfig s;
    s.method = SolverMethod::splitting;
    s.max_iters = 3000;
    return s;
  }();
  bool coherence = true;
  double probe_radius = 1.0;

  static SweepConfig from_run(const RunConfig& run);
  double gap_constant() const;
  double gap(int j) const;
  void validate() const;  // throws ConfigError and the system errors
};

struct ExperimentRecord {
  std::string preset;
  int j = 0;
  Rational alpha;
  double h_continuum = 0.0;
  int h_pixels = 0;  // masked columns
  double rel_err_l1a = 0.0;
  double rel_err_l2 = 0.0;
  double abs_err_l1a = 0.0;  // ||x* - x0||_{1,w}
  double reference_norm = 0.0;
  double missing_norm = 0.0;  // ||P_M f_j||_{1,w}, reported only
  double delta_j = 0.0;
  double mu_c = 0.0;
  double mu_c_extended = 0.0;  // probe radius doubled
  bool diagnostics = false;
  Certificate certificate;
  int iters = 0;
  double ms = 0.0;
  RecoveryStatus status = RecoveryStatus::converged;
  bool failed = false;
  std::string note;  // failure message or warning
};

// One record per j in [j_min, j_max]. Failures are recorded, not thrown.
std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg);
// Single record on an existing system (used by run_sweep and the CLI).
ExperimentRecord run_record(const SweepConfig& cfg, const DigitalSystem& sys, int j);

extern const char* const kSweepHeader;
// Fixed-schema CSV; with include_timing false the ms column is left empty.
std::string sweep_csv(const std::vector<ExperimentRecord>& records, bool include_timing = true);
// j,epsilon,h,delta_j,mu_c,bound,observed_error,truncation_flags
std::string diagnostics_csv(const std::vector<ExperimentRecord>& records, double epsilon);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the log2 residuals
  int used = 0;
};
// Least-squares slope of log2(error) against j. Throws DegenerateInput for
// fewer than three points or any error that is not positive and finite.
DecayFit fit_decay_rate(const std::vector<std::pair<int, double>>& points);
DecayFit fit_decay_rate(const std::vector<ExperimentRecord>& records);

struct ComparisonTable {
  std::vector<std::string> presets;
  std::vector<int> js;
  // records[p][i] belongs to presets[p] and js[i].
  std::vector<std::vector<ExperimentRecord>> records;
};
// Configs must agree on grid, weight, scales and gap constant; throws
// DimensionMismatch otherwise.
ComparisonTable compare_presets(const std::vector<SweepConfig>& configs);
// j, then rel_err_l1a for each preset.
std::string comparison_csv(const ComparisonTable& t);
// log2 relative error against j, one polyline per preset.
GrayImage comparison_plot(const ComparisonTable& t, int size = 256);

}  // namespace unishear
