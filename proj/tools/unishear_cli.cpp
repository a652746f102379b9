// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 non-convergence (output still written), 4 I/O error.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "unishear/config.hpp"
#include "unishear/diagnostics.hpp"
#include "unishear/errors.hpp"
#include "unishear/harness.hpp"
#include "unishear/io.hpp"
#include "unishear/model.hpp"
#include "unishear/recover.hpp"
#include "unishear/transform.hpp"

namespace fs = std::filesystem;
using namespace unishear;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitIo = 4;
constexpr const char* kOutdirVariable = "UNISHEAR_OUTDIR";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Header line with the grid mapping, printed by every command.
std::string mapping_line(const RunConfig& c) {
  return "# grid N=" + std::to_string(c.N) + " J=" + std::to_string(c.J) + " T=0.5 pixel=1/" + std::to_string(c.N) +
         " x_i=(i+1/2)/N-1/2 frequency=dft_index preset=" + c.preset;
}

fs::path prepare_output(const RunConfig& c) {
  const fs::path dir(c.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + c.output);
  const fs::path probe = dir / ".unishear_write_test";
  {
    std::FILE* f = std::fopen(probe.string().c_str(), "wb");
    if (!f) throw IoError("output directory is not writable: " + c.output);
    std::fclose(f);
  }
  fs::remove(probe, ec);
  return dir;
}

DigitalSystem make_system(const RunConfig& c) { return build_digital_system(c.sequence(), c.N, c.J); }

Image load_input(const RunConfig& c, int N) {
  if (c.input.empty()) throw ConfigError("this command needs an input image (input=<path>)");
  Image img = read_image_any(c.input);
  if (img.n != N) throw DimensionMismatch("input is " + std::to_string(img.n) + " pixels wide, grid N=" + std::to_string(N));
  return img;
}

Mask load_mask(const RunConfig& c) {
  if (!c.mask.empty()) {
    const RawImage r = read_raw(c.mask);
    if (r.image.n != c.N) throw DimensionMismatch("mask size does not match grid");
    return mask_from_image(r.image, r.header.h);
  }
  if (c.h > 0.0) return make_mask(c.h, c.N);
  throw ConfigError("missing mask spec: set h=<half-width> or mask=<path>");
}

void write_image(const fs::path& dir, const std::string& stem, const Image& img, const RawHeader& header) {
  write_raw((dir / (stem + ".raw")).string(), img, header);
  write_pgm((dir / (stem + ".pgm")).string(), to_gray(img));
}

RawHeader header_for(const RunConfig& c, double h, bool model_scale) {
  RawHeader hd;
  hd.n = c.N;
  hd.scale_key = model_scale ? "j" : "J";
  hd.scale = model_scale ? c.j : c.J;
  hd.T = 0.5;
  hd.rho = c.weight.rho;
  hd.h = h;
  return hd;
}

int cmd_describe(const RunConfig& c) {
  const DigitalSystem sys = make_system(c);
  std::cout << mapping_line(c) << "\n# j,l,orientation,alpha_num,alpha_den,normalization\n";
  for (std::size_t b = 0; b + 1 < sys.band_count(); ++b) std::cout << band_listing_line(sys.bands()[b]) << "\n";
  std::vector<int> per_scale(static_cast<std::size_t>(c.J), 0);
  for (std::size_t b = 1; b + 1 < sys.band_count(); ++b) ++per_scale[static_cast<std::size_t>(sys.bands()[b].j)];
  for (int j = 0; j < c.J; ++j) std::cout << "scale " << j << " bands " << per_scale[static_cast<std::size_t>(j)] << "\n";
  std::cout << "band_count " << sys.band_count() - 1 << "\n"
            << "band_count_with_completion " << sys.band_count() << "\n"
            << "tiling_residual " << num(tiling_residual(sys)) << "\n";
  return kExitOk;
}

int cmd_model(const RunConfig& c) {
  c.validate_scale();
  const fs::path dir = prepare_output(c);
  const ModelInstance m = filtered_model(c.j, c.N, c.weight);
  const std::string stem = "model_j" + std::to_string(c.j);
  write_image(dir, stem, m.image, header_for(c, 0.0, true));
  std::cout << mapping_line(c) << "\nmodel " << (dir / (stem + ".raw")).string() << "\nimag_residue "
            << num(m.imag_residue) << "\n";
  return kExitOk;
}

int cmd_mask(const RunConfig& c) {
  if (!(c.h > 0.0)) throw ConfigError("missing mask spec: set h=<half-width>");
  const fs::path dir = prepare_output(c);
  const Mask m = make_mask(c.h, c.N);
  write_image(dir, "mask", mask_to_image(m), header_for(c, c.h, false));
  std::cout << mapping_line(c) << "\nmask " << (dir / "mask.raw").string() << "\ncolumns " << m.column_count() << "\n";
  if (m.empty()) std::cerr << "warning: empty mask (h is below half a pixel)\n";
  return kExitOk;
}

int cmd_analyze(const RunConfig& c) {
  const DigitalSystem sys = make_system(c);
  const Image img = load_input(c, c.N);
  const fs::path dir = prepare_output(c);
  const CoefficientSet coef = analyze(img, sys);
  write_coefficients((dir / "coefficients.bin").string(), coef, sys);
  std::cout << mapping_line(c) << "\ncoefficients " << (dir / "coefficients.bin").string() << "\nl1_analysis_norm "
            << num(l1_norm(coef, sys)) << "\nenergy " << num(l2_energy(coef)) << "\nimage_energy "
            << num(dot(img, img)) << "\n";
  return kExitOk;
}

int cmd_synthesize(const RunConfig& c) {
  const DigitalSystem sys = make_system(c);
  if (c.input.empty()) throw ConfigError("synthesize needs input=<coefficient dump>");
  const CoefficientFile f = read_coefficients(c.input);
  if (f.n != c.N || f.J != c.J || f.coefficients.bands.size() != sys.band_count())
    throw DimensionMismatch("coefficient dump does not match the configured system");
  const fs::path dir = prepare_output(c);
  const Image img = synthesize(f.coefficients, sys);
  write_image(dir, "synthesized", img, header_for(c, 0.0, false));
  std::cout << mapping_line(c) << "\nimage " << (dir / "synthesized.raw").string() << "\n";
  return kExitOk;
}

std::string error_lines(const RunConfig& c, const Image& recovered, const DigitalSystem& sys) {
  if (c.reference.empty()) return "";
  Image ref = read_image_any(c.reference);
  if (ref.n != c.N) throw DimensionMismatch("reference size does not match grid");
  return "rel_err_l1a=" + num(relative_error(recovered, ref, sys)) + "\nrel_err_l2=" +
         num(relative_l2_error(recovered, ref)) + "\n";
}

int cmd_inpaint(const RunConfig& c) {
  const Mask mask = load_mask(c);
  const DigitalSystem sys = make_system(c);
  const Image img = load_input(c, c.N);
  const fs::path dir = prepare_output(c);
  const RecoveryReport rep = inpaint_l1(img, mask, sys, c.solver);
  write_image(dir, "inpainted", rep.recovered, header_for(c, mask.h, false));
  const std::string report = "solver=" + std::string(solver_method_name(c.solver.method)) + "\nh_pixels=" +
                             std::to_string(mask.column_count()) + "\n" + format_report(rep) +
                             error_lines(c, rep.recovered, sys);
  write_text((dir / "inpaint_report.txt").string(), report);
  std::cout << mapping_line(c) << "\n" << report;
  return rep.status == RecoveryStatus::converged ? kExitOk : kExitNonConvergence;
}

int cmd_threshold(const RunConfig& c) {
  const Mask mask = load_mask(c);
  const DigitalSystem sys = make_system(c);
  const Image img = load_input(c, c.N);
  double beta = c.beta;
  if (c.beta_quantile >= 0.0) beta = beta_quantile(img, mask, sys, c.beta_quantile);
  if (!(beta >= 0.0)) throw ConfigError("threshold needs beta=<value> or beta_quantile=<q>");
  const fs::path dir = prepare_output(c);
  const RecoveryReport rep = inpaint_threshold_onestep(img, mask, sys, beta, c.cone_restricted);
  write_image(dir, "thresholded", rep.recovered, header_for(c, mask.h, false));
  const std::string report = "beta=" + num(beta) + "\n" + format_report(rep) + error_lines(c, rep.recovered, sys);
  write_text((dir / "threshold_report.txt").string(), report);
  std::cout << mapping_line(c) << "\n" << report;
  return kExitOk;
}

int cmd_diagnose(const RunConfig& c) {
  c.validate_scale();
  const Mask mask = load_mask(c);
  const DigitalSystem sys = make_system(c);
  const fs::path dir = prepare_output(c);
  const ModelInstance m = filtered_model(c.j, c.N, c.weight);
  const ClusterSpec cluster = build_cluster(c.j, c.epsilon, sys, c.neighbor);
  const DeltaReport d = delta_sparsity(m.image, cluster, sys);
  const CoherenceReport mu =
      cluster_coherence(cluster, mask, sys, default_probe_set(cluster, mask, sys, c.probe_radius));
  const double norm0 = l1_analysis_norm(m.image, sys);
  double observed = std::nan("");
  if (!c.input.empty()) {
    const Image rec = load_input(c, c.N);
    Image diff(c.N);
    for (std::size_t i = 0; i < diff.px.size(); ++i) diff.px[i] = rec.px[i] - m.image.px[i];
    observed = l1_analysis_norm(diff, sys);
  }
  const Certificate cert = verify_error_bound(d.delta, mu.mu, std::isnan(observed) ? 0.0 : observed, 1e-4 * norm0);
  std::string flags = "probe_radius_change=" + num(mu.truncation_change());
  if (mu.truncation_change() >= 0.01) flags += ";probe_radius_unstable";
  if (mask.empty()) flags += ";empty_mask";
  const std::string csv = "j,epsilon,h,delta_j,mu_c,bound,observed_error,truncation_flags\n" + std::to_string(c.j) +
                          "," + num(c.epsilon) + "," + num(mask.h) + "," + num(d.delta) + "," + num(mu.mu) + "," +
                          (cert.applicable ? num(cert.bound) : std::string("nan")) + "," +
                          (std::isnan(observed) ? std::string("nan") : num(observed)) + "," + flags + "\n";
  write_text((dir / "diagnostics.csv").string(), csv);
  std::cout << mapping_line(c) << "\ndelta_j " << num(d.delta) << "\nin_cluster " << num(d.in_cluster)
            << "\nmu_c " << num(mu.mu) << "\nmu_c_extended " << num(mu.mu_extended) << "\nprobes " << mu.probes
            << "\ncertificate " << (cert.applicable ? (std::isnan(observed) ? "bound_only" : (cert.holds ? "holds" : "violated")) : "not_applicable")
            << "\nbound " << (cert.applicable ? num(cert.bound) : std::string("nan")) << "\n";
  return kExitOk;
}

void report_fit(const std::vector<ExperimentRecord>& recs) {
  try {
    const DecayFit f = fit_decay_rate(recs);
    std::cout << "fit_slope " << num(f.slope) << "\nfit_residual " << num(f.residual) << "\n";
  } catch (const DegenerateInput& e) {
    std::cout << "fit_slope nan (" << e.what() << ")\n";
  }
}

int cmd_sweep(const RunConfig& c) {
  const SweepConfig sc = SweepConfig::from_run(c);
  sc.validate();
  const fs::path dir = prepare_output(c);
  const std::vector<ExperimentRecord> recs = run_sweep(sc);
  write_text((dir / "sweep.csv").string(), sweep_csv(recs));
  write_text((dir / "sweep_diagnostics.csv").string(), diagnostics_csv(recs, sc.epsilon));
  ComparisonTable t;
  t.presets = {sc.preset};
  for (const auto& r : recs) t.js.push_back(r.j);
  t.records = {recs};
  write_pgm((dir / "sweep.pgm").string(), comparison_plot(t));
  std::cout << mapping_line(c) << "\n" << sweep_csv(recs);
  for (const auto& r : recs) {
    std::cout << "missing_norm j=" << r.j << " " << num(r.missing_norm) << "\n";
    if (!r.note.empty()) std::cerr << "j=" << r.j << ": " << r.note << "\n";
  }
  report_fit(recs);
  return kExitOk;
}

int cmd_compare(const RunConfig& c) {
  std::vector<SweepConfig> configs;
  const SweepConfig base = SweepConfig::from_run(c);
  for (const std::string& p : c.preset_list()) {
    SweepConfig sc = base;
    sc.preset = p;
    // One absolute gap sequence for all presets, from the base preset's law.
    sc.gap_preset = base.preset;
    sc.validate();
    configs.push_back(sc);
  }
  const fs::path dir = prepare_output(c);
  const ComparisonTable t = compare_presets(configs);
  std::vector<ExperimentRecord> all;
  for (const auto& recs : t.records) all.insert(all.end(), recs.begin(), recs.end());
  write_text((dir / "compare.csv").string(), comparison_csv(t));
  write_text((dir / "compare_records.csv").string(), sweep_csv(all));
  write_pgm((dir / "compare.pgm").string(), comparison_plot(t));
  std::cout << mapping_line(c) << "\n" << comparison_csv(t);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretized universal shearlet frames: transform, inpainting and diagnostics"};
  app.require_subcommand(1);
  // "-h" would collide with the gap key --h.
  app.set_help_flag("--help", "print this help and exit");
  const std::map<std::string, std::string> help = {
      {"describe", "print the band listing and tiling residual"},
      {"model", "write the filtered line model f_j"},
      {"mask", "write the strip mask |x1| <= h"},
      {"analyze", "write the coefficient dump of an image"},
      {"synthesize", "rebuild an image from a coefficient dump"},
      {"inpaint", "l1-analysis inpainting of a corrupted image"},
      {"threshold", "one-step thresholding inpainting"},
      {"diagnose", "clustered sparsity, cluster coherence and the error bound"},
      {"sweep", "per-scale inpainting experiment"},
      {"compare", "the sweep for several presets under one gap law"}};
  const std::vector<std::string> order = {"describe", "model",    "mask",  "analyze", "synthesize",
                                          "inpaint",  "threshold", "diagnose", "sweep",  "compare"};

  std::string config_path;
  std::vector<std::string> sets;
  std::string positional;
  std::map<std::string, std::string> flag_values;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--set", sets, "override, key=value (repeatable)");
  for (const std::string& key : config_keys()) app.add_option("--" + key, flag_values[key], "configuration key " + key);
  for (const std::string& name : order) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("input", positional, "input path (same as input=...)");
    sub->set_help_flag("--help", "print this help and exit");
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    // Output directory precedence: flag or --set, then the environment, then
    // the configuration file.
    if (const char* env = std::getenv(kOutdirVariable); env && *env) cfg.output = env;
    for (const std::string& key : config_keys()) {
      const CLI::Option* opt = app.get_option("--" + key);
      if (opt->count() > 0) apply_setting(cfg, key, flag_values[key]);
    }
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!positional.empty()) cfg.input = positional;
    cfg.validate();

    if (command == "describe") return cmd_describe(cfg);
    if (command == "model") return cmd_model(cfg);
    if (command == "mask") return cmd_mask(cfg);
    if (command == "analyze") return cmd_analyze(cfg);
    if (command == "synthesize") return cmd_synthesize(cfg);
    if (command == "inpaint") return cmd_inpaint(cfg);
    if (command == "threshold") return cmd_threshold(cfg);
    if (command == "diagnose") return cmd_diagnose(cfg);
    if (command == "sweep") return cmd_sweep(cfg);
    if (command == "compare") return cmd_compare(cfg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\nusage: unishear " << command
              << " [--config FILE] [--set KEY=VALUE]... [--KEY VALUE]... [input]  (see unishear --help)\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
