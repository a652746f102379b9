#include "unishear/recover.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "unishear/errors.hpp"

namespace unishear {

void SolverConfig::validate() const {
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(decay > 0.0 && decay < 1.0)) throw ConfigError("decay must lie in (0,1)");
  if (lambda_max > 0.0 && lambda_min > 0.0 && lambda_min > lambda_max)
    throw ConfigError("lambda_min exceeds lambda_max");
  if (!(lambda_min_ratio > 0.0 && lambda_min_ratio < 1.0)) throw ConfigError("lambda_min_ratio must lie in (0,1)");
  if (!(tol > 0.0) || !(dual_tol > 0.0)) throw ConfigError("tolerances must be positive");
}

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "shrinkage_path" || name == "shrinkage") return SolverMethod::shrinkage_path;
  if (name == "splitting" || name == "admm") return SolverMethod::splitting;
  throw ConfigError("unknown solver '" + name + "'");
}

const char* solver_method_name(SolverMethod m) {
  return m == SolverMethod::shrinkage_path ? "shrinkage_path" : "splitting";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double soft(double v, double t) {
  const double a = std::fabs(v) - t;
  return a > 0.0 ? std::copysign(a, v) : 0.0;
}

double band_l1(std::span<const double> c) {
  double s = 0.0;
  for (double v : c) s += std::fabs(v);
  return s;
}

// Relative threshold weights w_b / max_b w_b.
std::vector<double> relative_weights(const DigitalSystem& sys) {
  std::vector<double> w(sys.band_count());
  double top = 0.0;
  for (std::size_t b = 0; b < w.size(); ++b) top = std::max(top, w[b] = sys.l1_weight(b));
  for (double& v : w) v /= top;
  return w;
}

// Overwrite the known pixels with the data so feasibility is exact.
void impose(Image& x, const Image& data, const Mask& mask) {
  for (int r = 0; r < x.n; ++r)
    for (int c = 0; c < x.n; ++c)
      if (!mask.columns[static_cast<std::size_t>(c)]) x(r, c) = data(r, c);
}

double feasibility(const Image& x, const Image& data, const Mask& mask) {
  double s = 0.0;
  for (int r = 0; r < x.n; ++r)
    for (int c = 0; c < x.n; ++c)
      if (!mask.columns[static_cast<std::size_t>(c)]) s += (x(r, c) - data(r, c)) * (x(r, c) - data(r, c));
  return std::sqrt(s);
}

double rel_change(const Image& a, const Image& b) {
  double d = 0.0, n = 0.0;
  for (std::size_t i = 0; i < a.px.size(); ++i) d += (a.px[i] - b.px[i]) * (a.px[i] - b.px[i]), n += b.px[i] * b.px[i];
  return n > 0.0 ? std::sqrt(d / n) : std::sqrt(d);
}

RecoveryReport shrinkage_path(const Image& data, const Mask& mask, const DigitalSystem& sys, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  const std::vector<double> rw = relative_weights(sys);
  RecoveryReport rep;

  double lmax = cfg.lambda_max;
  if (lmax <= 0.0) {
    stream_bands(
        data, sys,
        [&](std::size_t b, std::span<double> c) {
          for (double v : c) lmax = std::max(lmax, std::fabs(v) / rw[b]);
        },
        nullptr);
  }
  const double lmin = cfg.lambda_min > 0.0 ? cfg.lambda_min : cfg.lambda_min_ratio * lmax;

  Image accepted = data, current = data, next;
  double accepted_obj = std::numeric_limits<double>::infinity();
  double lambda = lmax;
  rep.status = RecoveryStatus::non_convergence;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    double obj = 0.0;
    stream_bands(
        current, sys,
        [&](std::size_t b, std::span<double> c) {
          obj += sys.l1_weight(b) * band_l1(c);
          const double t = lambda * rw[b];
          for (double& v : c) v = soft(v, t);
        },
        &next);
    if (obj <= accepted_obj * (1.0 + 1e-8) || !std::isfinite(accepted_obj)) {
      accepted = current;
      accepted_obj = obj;
      rep.objective_trace.push_back(obj);
      impose(next, data, mask);
      rep.residual = rel_change(next, current);
      current = std::move(next);
      if (lambda <= lmin && rep.residual < cfg.tol) {
        rep.status = RecoveryStatus::converged;
        ++it;
        break;
      }
    } else {
      // Stage raised the objective: restart the next stage from the last accepted iterate.
      current = accepted;
    }
    lambda = std::max(lmin, lambda * cfg.decay);
  }
  // Return the last accepted iterate unless the final one is verified no worse.
  const double final_obj = l1_analysis_norm(current, sys);
  if (final_obj <= accepted_obj * (1.0 + 1e-8)) {
    accepted = std::move(current);
    accepted_obj = final_obj;
    rep.objective_trace.push_back(final_obj);
  }
  rep.recovered = std::move(accepted);
  rep.objective = accepted_obj;
  rep.iterations = it;
  rep.feasibility_residual = feasibility(rep.recovered, data, mask);
  rep.wall_ms = ms_since(t0);
  return rep;
}

RecoveryReport splitting(const Image& data, const Mask& mask, const DigitalSystem& sys, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  const std::size_t nb = sys.band_count();
  const std::size_t npx = data.px.size();
  RecoveryReport rep;

  CoefficientSet z = analyze(data, sys), u;
  u.n = z.n;
  u.bands.assign(nb, std::vector<double>(npx, 0.0));
  double wmax = 0.0, cmax = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    wmax = std::max(wmax, sys.l1_weight(b));
    for (double v : z.bands[b]) cmax = std::max(cmax, std::fabs(v));
  }
  double rho = cfg.penalty > 0.0 ? cfg.penalty : (cmax > 0.0 ? wmax / (0.05 * cmax) : 1.0);

  Image x = data, v;
  CoefficientSet diff;
  diff.n = z.n;
  diff.bands.assign(nb, std::vector<double>(npx));
  std::vector<double> zold(npx);
  rep.status = RecoveryStatus::non_convergence;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    // x-update: projection of T^*(z - u) onto the feasible set.
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t i = 0; i < npx; ++i) diff.bands[b][i] = z.bands[b][i] - u.bands[b][i];
    x = synthesize(diff, sys);
    impose(x, data, mask);

    // z- and u-updates, with residual norms for the stopping rule.
    double r2 = 0.0, tx2 = 0.0, z2 = 0.0;
    stream_bands(
        x, sys,
        [&](std::size_t b, std::span<double> c) {
          std::copy(z.bands[b].begin(), z.bands[b].end(), zold.begin());
          const double t = sys.l1_weight(b) / rho;
          auto& zb = z.bands[b];
          auto& ub = u.bands[b];
          for (std::size_t i = 0; i < npx; ++i) {
            zb[i] = soft(c[i] + ub[i], t);
            const double r = c[i] - zb[i];
            ub[i] += r;
            r2 += r * r;
            tx2 += c[i] * c[i];
            z2 += zb[i] * zb[i];
            diff.bands[b][i] = zb[i] - zold[i];
          }
        },
        nullptr);
    if (it % 10 != 9 && it + 1 < cfg.max_iters) continue;
    // Dual residual P_M T^*(z - z_old) (scaled by 1/rho), relative to P_M T^* u or x.
    const Image dz = synthesize(diff, sys);
    const Image tu = synthesize(u, sys);
    double s2 = 0.0, tu2 = 0.0;
    for (int r = 0; r < x.n; ++r)
      for (int c = 0; c < x.n; ++c)
        if (mask.columns[static_cast<std::size_t>(c)]) s2 += dz(r, c) * dz(r, c), tu2 += tu(r, c) * tu(r, c);
    const double primal = std::sqrt(r2) / std::max(std::sqrt(std::max(tx2, z2)), 1e-300);
    const double dual = std::sqrt(s2) / std::max({std::sqrt(tu2), norm2(x), 1e-300});
    rep.residual = std::max(primal, dual);
    if (primal < cfg.tol && dual < cfg.dual_tol) {
      rep.status = RecoveryStatus::converged;
      ++it;
      break;
    }
    // Residual balancing; u is the scaled dual so it rescales with rho.
    {
      double f = 1.0;
      const double r_abs = std::sqrt(r2), s_abs = rho * std::sqrt(s2);
      if (r_abs > 10.0 * s_abs) f = 2.0;
      else if (s_abs > 10.0 * r_abs) f = 0.5;
      if (f != 1.0) {
        rho *= f;
        for (auto& band : u.bands)
          for (double& val : band) val /= f;
      }
    }
  }
  rep.recovered = std::move(x);
  rep.objective = l1_analysis_norm(rep.recovered, sys);
  rep.objective_trace.push_back(rep.objective);
  rep.iterations = it;
  rep.feasibility_residual = feasibility(rep.recovered, data, mask);
  rep.wall_ms = ms_since(t0);
  return rep;
}

}  // namespace

RecoveryReport inpaint_l1(const Image& corrupted, const Mask& mask, const DigitalSystem& sys, const SolverConfig& cfg) {
  cfg.validate();
  if (corrupted.n != sys.N() || mask.n != sys.N()) throw DimensionMismatch("image, mask and grid sizes differ");
  const Image data = project_known(corrupted, mask);
  if (mask.empty()) {
    RecoveryReport rep;
    rep.recovered = corrupted;
    rep.objective = l1_analysis_norm(corrupted, sys);
    rep.objective_trace.push_back(rep.objective);
    return rep;
  }
  return cfg.method == SolverMethod::shrinkage_path ? shrinkage_path(data, mask, sys, cfg)
                                                     : splitting(data, mask, sys, cfg);
}

RecoveryReport inpaint_threshold_onestep(const Image& corrupted, const Mask& mask, const DigitalSystem& sys,
                                         double beta, bool cone_restricted) {
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
  const auto t0 = Clock::now();
  const Image data = project_known(corrupted, mask);
  RecoveryReport rep;
  stream_bands(
      data, sys,
      [&](std::size_t b, std::span<double> c) {
        const bool allowed = !cone_restricted || sys.bands()[b].iota == Orientation::vertical;
        for (double& v : c) {
          if (allowed && std::fabs(v) >= beta) {
            ++rep.kept;
          } else {
            v = 0.0;
          }
        }
      },
      &rep.recovered);
  rep.iterations = 1;
  rep.objective = l1_analysis_norm(rep.recovered, sys);
  rep.objective_trace.push_back(rep.objective);
  rep.feasibility_residual = feasibility(rep.recovered, data, mask);
  rep.wall_ms = ms_since(t0);
  return rep;
}

double beta_quantile(const Image& corrupted, const Mask& mask, const DigitalSystem& sys, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantile must lie in [0,1]");
  std::vector<double> mods;
  mods.reserve(corrupted.px.size() * sys.band_count());
  stream_bands(
      project_known(corrupted, mask), sys,
      [&](std::size_t, std::span<double> c) {
        for (double v : c) mods.push_back(std::fabs(v));
      },
      nullptr);
  const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(mods.size() - 1)));
  std::nth_element(mods.begin(), mods.begin() + static_cast<std::ptrdiff_t>(k), mods.end());
  return mods[k];
}

double relative_error(const Image& recovered, const Image& reference, const DigitalSystem& sys) {
  const double den = l1_analysis_norm(reference, sys);
  if (den == 0.0) throw ZeroReference();
  Image d(reference.n);
  for (std::size_t i = 0; i < d.px.size(); ++i) d.px[i] = recovered.px[i] - reference.px[i];
  return l1_analysis_norm(d, sys) / den;
}

double relative_l2_error(const Image& recovered, const Image& reference) {
  const double den = norm2(reference);
  if (den == 0.0) throw ZeroReference();
  double s = 0.0;
  for (std::size_t i = 0; i < reference.px.size(); ++i)
    s += (recovered.px[i] - reference.px[i]) * (recovered.px[i] - reference.px[i]);
  return std::sqrt(s) / den;
}

std::string format_report(const RecoveryReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "iterations=%d\nobjective=%.17g\nfeasibility_residual=%.17g\nresidual=%.17g\nstatus=%s\nwall_ms=%.3f\n",
                r.iterations, r.objective, r.feasibility_residual, r.residual,
                r.status == RecoveryStatus::converged ? "converged" : "non_convergence", r.wall_ms);
  return buf;
}

}  // namespace unishear
