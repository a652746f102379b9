#pragma once

#include <string>
#include <vector>

#include "unishear/image.hpp"
#include "unishear/model.hpp"
#include "unishear/transform.hpp"

namespace unishear {

enum class SolverMethod { shrinkage_path, splitting };

struct SolverConfig {
  SolverMethod method = SolverMethod::shrinkage_path;
  int max_iters = 300;
  // Shrinkage path. Non-positive lambda_max means max |T P_K x0| (in weighted
  // units); non-positive lambda_min means lambda_min_ratio * lambda_max.
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double lambda_min_ratio = 1e-4;
  double decay = 0.9;
  // Splitting (ADMM). Non-positive penalty picks one from the data.
  double penalty = 0.0;
  double dual_tol = 1e-6;
  // Relative iterate change (shrinkage) or primal residual (splitting).
  double tol = 1e-6;

  void validate() const;  // throws ConfigError
};

SolverMethod parse_solver_method(const std::string& name);
const char* solver_method_name(SolverMethod m);

enum class RecoveryStatus { converged, non_convergence };

struct RecoveryReport {
  Image recovered;
  int iterations = 0;
  double objective = 0.0;             // weighted l1 analysis norm of the result
  double feasibility_residual = 0.0;  // ||P_K x - P_K x0||_2
  double residual = 0.0;              // last change or KKT residual
  double wall_ms = 0.0;
  RecoveryStatus status = RecoveryStatus::converged;
  std::vector<double> objective_trace;  // accepted stage objectives
  std::size_t kept = 0;                 // thresholding: surviving coefficients
};

// argmin ||T x||_{1,w} subject to P_K x = P_K corrupted.
RecoveryReport inpaint_l1(const Image& corrupted, const Mask& mask, const DigitalSystem& sys, const SolverConfig& cfg);

// x = T^*(1{|c| >= beta} T P_K corrupted). With cone_restricted only vertical
// bands may survive.
RecoveryReport inpaint_threshold_onestep(const Image& corrupted, const Mask& mask, const DigitalSystem& sys,
                                         double beta, bool cone_restricted = false);

// q-quantile (0 <= q <= 1) of all coefficient moduli of P_K corrupted.
double beta_quantile(const Image& corrupted, const Mask& mask, const DigitalSystem& sys, double q);

// ||T(x - ref)||_{1,w} / ||T ref||_{1,w}; throws ZeroReference.
double relative_error(const Image& recovered, const Image& reference, const DigitalSystem& sys);
double relative_l2_error(const Image& recovered, const Image& reference);

// Key=value block for logs and CSV side files.
std::string format_report(const RecoveryReport& r);

}  // namespace unishear
