#include "unishear/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "unishear/diagnostics.hpp"
#include "unishear/errors.hpp"
#include "unishear/transform.hpp"

namespace unishear {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Relative tolerance on ||x0||_{1,w} added to the certificate bound.
constexpr double kCertificateSlack = 1e-4;
// Probe-radius doubling may move mu_c by at most this fraction.
constexpr double kTruncationLimit = 0.01;

}  // namespace

SweepConfig SweepConfig::from_run(const RunConfig& run) {
  SweepConfig c;
  c.preset = run.preset;
  c.N = run.N;
  c.J = run.J;
  c.j_min = run.j_min;
  c.j_max = run.j_max;
  c.epsilon = run.epsilon;
  c.epsilon_gap = run.epsilon_gap;
  c.gap_c = run.gap_c;
  c.h1_pixels = run.h1_pixels;
  c.weight = run.weight;
  // The sweep measures the exact minimizer, so it defaults to the splitting
  // solver unless a solver was chosen explicitly.
  const SweepConfig defaults;
  c.solver = run.solver;
  if (!run.is_set("solver")) c.solver.method = defaults.solver.method;
  if (!run.is_set("max_iters")) c.solver.max_iters = defaults.solver.max_iters;
  c.coherence = run.coherence;
  c.probe_radius = run.probe_radius;
  return c;
}

double SweepConfig::gap_constant() const {
  if (gap_c > 0.0) return gap_c;
  const ScalingSequence seq = parse_preset(gap_preset.empty() ? preset : gap_preset, J);
  return h1_pixels / N * std::exp2(seq.alpha(1).value() + epsilon_gap);
}

double SweepConfig::gap(int j) const {
  const ScalingSequence seq = parse_preset(gap_preset.empty() ? preset : gap_preset, J);
  return gap_constant() * std::exp2(-(seq.alpha(j).value() + epsilon_gap) * j);
}

void SweepConfig::validate() const {
  FrequencyGrid::make(N, J);
  (void)parse_preset(preset, J);
  if (!gap_preset.empty()) (void)parse_preset(gap_preset, J);
  weight.validate();
  solver.validate();
  if (j_min < 1 || j_max < j_min || j_max >= J) throw ConfigError("sweep scales must satisfy 1 <= j_min <= j_max <= J-1");
  if (!(epsilon > 0.0) || !(epsilon_gap > 0.0)) throw ConfigError("epsilon and epsilon_gap must be > 0");
  if (gap_c < 0.0 || !(h1_pixels > 0.0)) throw ConfigError("gap constant must be > 0");
  if (!(probe_radius > 0.0)) throw ConfigError("probe_radius must be > 0");
  for (int j = j_min; j <= j_max; ++j)
    if (gap(j) > 0.5) throw ConfigError("gap law exceeds the domain at j = " + std::to_string(j));
}

ExperimentRecord run_record(const SweepConfig& cfg, const DigitalSystem& sys, int j) {
  ExperimentRecord r;
  r.preset = cfg.preset;
  r.j = j;
  r.alpha = sys.sequence().alpha(j);
  r.h_continuum = cfg.gap(j);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ModelInstance model = filtered_model(j, cfg.N, cfg.weight);
    const Mask mask = make_mask(r.h_continuum, cfg.N);
    r.h_pixels = mask.column_count();
    if (mask.empty()) r.note = "empty mask";
    const RecoveryReport rep = inpaint_l1(project_known(model.image, mask), mask, sys, cfg.solver);
    r.iters = rep.iterations;
    r.status = rep.status;
    r.reference_norm = l1_analysis_norm(model.image, sys);
    r.missing_norm = l1_analysis_norm(project_missing(model.image, mask), sys);
    Image diff(cfg.N);
    for (std::size_t i = 0; i < diff.px.size(); ++i) diff.px[i] = rep.recovered.px[i] - model.image.px[i];
    r.abs_err_l1a = l1_analysis_norm(diff, sys);
    r.rel_err_l1a = relative_error(rep.recovered, model.image, sys);
    r.rel_err_l2 = relative_l2_error(rep.recovered, model.image);
    if (rep.status == RecoveryStatus::non_convergence)
      r.note = "non-convergence after " + std::to_string(rep.iterations) + " iterations";
    if (cfg.coherence) {
      const ClusterSpec cluster = build_cluster(j, cfg.epsilon, sys, true);
      r.delta_j = delta_sparsity(model.image, cluster, sys).delta;
      const CoherenceReport coh =
          cluster_coherence(cluster, mask, sys, default_probe_set(cluster, mask, sys, cfg.probe_radius));
      r.mu_c = coh.mu;
      r.mu_c_extended = coh.mu_extended;
      r.diagnostics = true;
      r.certificate = verify_error_bound(r.delta_j, r.mu_c, r.abs_err_l1a, kCertificateSlack * r.reference_norm);
    }
  } catch (const std::exception& e) {
    r.failed = true;
    r.note = e.what();
  }
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const DigitalSystem sys = build_digital_system(parse_preset(cfg.preset, cfg.J), cfg.N, cfg.J);
  std::vector<ExperimentRecord> out;
  for (int j = cfg.j_min; j <= cfg.j_max; ++j) out.push_back(run_record(cfg, sys, j));
  return out;
}

const char* const kSweepHeader =
    "preset,j,alpha_num,alpha_den,h_continuum,h_pixels,rel_err_l1a,rel_err_l2,delta_j,mu_c,bound,bound_ok,iters,ms";

std::string sweep_csv(const std::vector<ExperimentRecord>& records, bool include_timing) {
  std::string out = std::string(kSweepHeader) + "\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const ExperimentRecord& r : records) {
    const bool ok = !r.failed;
    const bool diag = ok && r.diagnostics;
    std::string bound_ok = "na";
    if (diag && r.certificate.applicable) bound_ok = r.certificate.holds ? "1" : "0";
    out += csv_field(r.preset) + "," + std::to_string(r.j) + "," + std::to_string(r.alpha.num) + "," +
           std::to_string(r.alpha.den) + "," + num(r.h_continuum) + "," + std::to_string(r.h_pixels) + "," +
           num(ok ? r.rel_err_l1a : nan) + "," + num(ok ? r.rel_err_l2 : nan) + "," + num(diag ? r.delta_j : nan) +
           "," + num(diag ? r.mu_c : nan) + "," + num(diag && r.certificate.applicable ? r.certificate.bound : nan) +
           "," + bound_ok + "," + std::to_string(r.iters) + "," + (include_timing ? num(r.ms) : std::string()) + "\n";
  }
  return out;
}

std::string diagnostics_csv(const std::vector<ExperimentRecord>& records, double epsilon) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string out = "j,epsilon,h,delta_j,mu_c,bound,observed_error,truncation_flags\n";
  for (const ExperimentRecord& r : records) {
    std::vector<std::string> flags;
    if (r.failed) flags.push_back("failed");
    if (r.h_pixels == 0 && !r.failed) flags.push_back("empty_mask");
    if (r.diagnostics && r.mu_c > 0.0) {
      const double change = std::fabs(r.mu_c_extended - r.mu_c) / r.mu_c;
      flags.push_back("probe_radius_change=" + num(change));
      if (change >= kTruncationLimit) flags.push_back("probe_radius_unstable");
    }
    if (r.status == RecoveryStatus::non_convergence) flags.push_back("non_convergence");
    std::string f;
    for (std::size_t i = 0; i < flags.size(); ++i) f += (i ? ";" : "") + flags[i];
    if (f.empty()) f = "none";
    const bool diag = !r.failed && r.diagnostics;
    out += std::to_string(r.j) + "," + num(epsilon) + "," + num(r.h_continuum) + "," + num(diag ? r.delta_j : nan) +
           "," + num(diag ? r.mu_c : nan) + "," + num(diag && r.certificate.applicable ? r.certificate.bound : nan) +
           "," + num(r.failed ? nan : r.abs_err_l1a) + "," + f + "\n";
  }
  return out;
}

DecayFit fit_decay_rate(const std::vector<std::pair<int, double>>& points) {
  if (points.size() < 3) throw DegenerateInput("decay fit needs at least three records");
  double sx = 0.0, sy = 0.0;
  for (const auto& [j, e] : points) {
    if (!(e > 0.0) || !std::isfinite(e)) throw DegenerateInput("decay fit needs positive finite errors");
    sx += j;
    sy += std::log2(e);
  }
  const double n = static_cast<double>(points.size()), mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [j, e] : points) {
    sxx += (j - mx) * (j - mx);
    sxy += (j - mx) * (std::log2(e) - my);
  }
  if (sxx == 0.0) throw DegenerateInput("decay fit needs distinct scales");
  DecayFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (const auto& [j, e] : points) {
    const double d = std::log2(e) - (f.intercept + f.slope * j);
    rss += d * d;
  }
  f.residual = std::sqrt(rss / n);
  f.used = static_cast<int>(points.size());
  return f;
}

DecayFit fit_decay_rate(const std::vector<ExperimentRecord>& records) {
  std::vector<std::pair<int, double>> pts;
  for (const ExperimentRecord& r : records) {
    if (r.failed) throw DegenerateInput("decay fit over a failed record (j = " + std::to_string(r.j) + ")");
    pts.emplace_back(r.j, r.rel_err_l1a);
  }
  return fit_decay_rate(pts);
}

ComparisonTable compare_presets(const std::vector<SweepConfig>& configs) {
  ComparisonTable t;
  if (configs.empty()) return t;
  const SweepConfig& a = configs.front();
  for (const SweepConfig& c : configs) {
    if (c.N != a.N || c.J != a.J || c.j_min != a.j_min || c.j_max != a.j_max)
      throw DimensionMismatch("compared sweeps must share grid and scales");
    if (c.weight.rho != a.weight.rho || c.weight.amplitude != a.weight.amplitude || c.weight.profile != a.weight.profile)
      throw DimensionMismatch("compared sweeps must share the model");
    for (int j = a.j_min; j <= a.j_max; ++j)
      if (c.gap(j) != a.gap(j)) throw DimensionMismatch("compared sweeps must share the gap law");
  }
  for (int j = a.j_min; j <= a.j_max; ++j) t.js.push_back(j);
  for (const SweepConfig& c : configs) {
    t.presets.push_back(c.preset);
    t.records.push_back(run_sweep(c));
  }
  return t;
}

std::string comparison_csv(const ComparisonTable& t) {
  std::string out = "j";
  for (const auto& p : t.presets) out += "," + csv_field("rel_err_l1a[" + p + "]");
  out += "\n";
  for (std::size_t i = 0; i < t.js.size(); ++i) {
    out += std::to_string(t.js[i]);
    for (const auto& recs : t.records) out += "," + num(recs[i].failed ? std::nan("") : recs[i].rel_err_l1a);
    out += "\n";
  }
  return out;
}

GrayImage comparison_plot(const ComparisonTable& t, int size) {
  GrayImage g;
  g.width = g.height = size;
  g.px.assign(static_cast<std::size_t>(size) * size, 255);
  if (t.js.empty()) return g;
  // Value range of log2 errors (floored at 2^-60 so exact recoveries plot).
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto y_of = [](double e) { return std::log2(std::max(e, std::exp2(-60.0))); };
  for (const auto& recs : t.records)
    for (const auto& r : recs)
      if (!r.failed) lo = std::min(lo, y_of(r.rel_err_l1a)), hi = std::max(hi, y_of(r.rel_err_l1a));
  if (!(hi >= lo)) return g;
  if (hi - lo < 1.0) lo -= 0.5, hi += 0.5;
  const int m = size / 10;
  auto put = [&](int x, int y, std::uint8_t v) {
    if (x >= 0 && x < size && y >= 0 && y < size) g.px[static_cast<std::size_t>(y) * size + x] = v;
  };
  for (int i = m; i < size - m; ++i) put(i, size - m, 0), put(m, i, 0);
  const int j0 = t.js.front(), j1 = t.js.back();
  auto px = [&](int j) { return j1 == j0 ? size / 2 : m + (size - 2 * m) * (j - j0) / (j1 - j0); };
  auto py = [&](double y) { return size - m - static_cast<int>(std::lround((size - 2 * m) * (y - lo) / (hi - lo))); };
  for (std::size_t p = 0; p < t.records.size(); ++p) {
    const auto shade = static_cast<std::uint8_t>(160 * p / std::max<std::size_t>(1, t.records.size()));
    for (std::size_t i = 0; i + 1 < t.js.size(); ++i) {
      const auto& a = t.records[p][i];
      const auto& b = t.records[p][i + 1];
      if (a.failed || b.failed) continue;
      const int xa = px(t.js[i]), xb = px(t.js[i + 1]), ya = py(y_of(a.rel_err_l1a)), yb = py(y_of(b.rel_err_l1a));
      const int steps = std::max({std::abs(xb - xa), std::abs(yb - ya), 1});
      for (int s = 0; s <= steps; ++s)
        put(xa + (xb - xa) * s / steps, ya + (yb - ya) * s / steps, shade);
    }
    for (std::size_t i = 0; i < t.js.size(); ++i) {
      if (t.records[p][i].failed) continue;
      const int x = px(t.js[i]), y = py(y_of(t.records[p][i].rel_err_l1a));
      for (int dx = -2; dx <= 2; ++dx)
        for (int dy = -2; dy <= 2; ++dy) put(x + dx, y + dy, shade);
    }
  }
  return g;
}

}  // namespace unishear
