#include <cmath>

#include "doctest.h"
#include "unishear/errors.hpp"
#include "unishear/recover.hpp"

using namespace unishear;

namespace {

const DigitalSystem& sys32() {
  static const DigitalSystem s = DigitalSystem::build(preset_alpha(1.0, 2), 32, 2);
  return s;
}

Image model32() { return filtered_model(1, 32, WeightSpec{}).image; }

SolverConfig splitting(int iters) {
  SolverConfig c;
  c.method = SolverMethod::splitting;
  c.max_iters = iters;
  c.tol = 1e-9;
  c.dual_tol = 1e-9;
  return c;
}

}  // namespace

TEST_CASE("solver config validation") {
  CHECK_NOTHROW(SolverConfig{}.validate());
  SolverConfig c;
  c.decay = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.max_iters = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.lambda_min_ratio = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_solver_method("splitting") == SolverMethod::splitting);
  CHECK(parse_solver_method("shrinkage") == SolverMethod::shrinkage_path);
  CHECK_THROWS_AS(parse_solver_method("nope"), ConfigError);
}

TEST_CASE("empty mask returns the input bit-exact") {
  const Image f = model32();
  for (auto method : {SolverMethod::shrinkage_path, SolverMethod::splitting}) {
    SolverConfig c;
    c.method = method;
    const auto r = inpaint_l1(f, empty_mask(32), sys32(), c);
    CHECK(r.recovered.px == f.px);
    CHECK(r.iterations == 0);
    CHECK(r.feasibility_residual == 0.0);
  }
}

TEST_CASE("solvers agree and beat the ground truth objective") {
  const Image x0 = model32();
  const Mask m = make_mask(2.0 / 32, 32);  // 4 pixel columns
  const Image y = project_known(x0, m);
  const double truth = l1_analysis_norm(x0, sys32());

  SolverConfig sh;
  sh.max_iters = 2000;
  sh.lambda_min_ratio = 1e-8;
  const auto a = inpaint_l1(y, m, sys32(), sh);
  const auto b = inpaint_l1(y, m, sys32(), splitting(3000));
  CHECK(a.feasibility_residual == 0.0);
  CHECK(b.feasibility_residual == 0.0);
  CHECK(a.objective <= truth * (1 + 1e-6));
  CHECK(b.objective <= truth * (1 + 1e-6));
  CHECK(std::fabs(a.objective - b.objective) <= 0.01 * b.objective);
  CHECK(a.objective == doctest::Approx(l1_analysis_norm(a.recovered, sys32())).epsilon(1e-12));
  // Known pixels are kept exactly.
  CHECK(project_known(b.recovered, m).px == y.px);
}

TEST_CASE("non-convergence is reported") {
  const Image x0 = model32();
  const Mask m = make_mask(2.0 / 32, 32);
  const auto r = inpaint_l1(project_known(x0, m), m, sys32(), splitting(10));
  CHECK(r.status == RecoveryStatus::non_convergence);
  CHECK(r.iterations == 10);
}

TEST_CASE("one-step thresholding") {
  const Image x0 = model32();
  const Mask m = make_mask(2.0 / 32, 32);
  const Image y = project_known(x0, m);
  const auto full = inpaint_threshold_onestep(y, m, sys32(), 0.0);
  double dev = 0.0;
  for (std::size_t i = 0; i < y.px.size(); ++i) dev = std::max(dev, std::fabs(full.recovered.px[i] - y.px[i]));
  CHECK(dev <= 1e-10 * max_abs(y));

  const auto c = analyze(y, sys32());
  double cmax = 0.0;
  for (const auto& band : c.bands)
    for (double v : band) cmax = std::max(cmax, std::fabs(v));
  const auto none = inpaint_threshold_onestep(y, m, sys32(), cmax * 1.01);
  CHECK(max_abs(none.recovered) == 0.0);
  CHECK(none.kept == 0);

  const double beta = beta_quantile(y, m, sys32(), 0.5);
  std::size_t above = 0, strictly = 0, total = 0;
  for (const auto& band : c.bands)
    for (double v : band) above += std::fabs(v) >= beta, strictly += std::fabs(v) > beta, ++total;
  const auto half = inpaint_threshold_onestep(y, m, sys32(), beta);
  CHECK(half.kept == above);
  CHECK(above >= total / 2);
  CHECK(strictly <= total / 2);
  CHECK_THROWS_AS(beta_quantile(y, m, sys32(), 1.5), ConfigError);

  const auto vert = inpaint_threshold_onestep(y, m, sys32(), 0.0, true);
  std::size_t vcount = 0;
  for (std::size_t b = 0; b < sys32().band_count(); ++b)
    if (sys32().bands()[b].iota == Orientation::vertical) vcount += c.bands[b].size();
  CHECK(vert.kept == vcount);
}

TEST_CASE("relative error") {
  const Image x0 = model32();
  CHECK(relative_error(x0, x0, sys32()) == 0.0);
  CHECK(relative_error(Image(32), x0, sys32()) == doctest::Approx(1.0).epsilon(1e-14));
  Image twice = x0;
  for (double& v : twice.px) v *= 2;
  CHECK(relative_error(twice, x0, sys32()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(relative_error(x0, Image(32), sys32()), ZeroReference);
  CHECK(relative_l2_error(x0, x0) == 0.0);
}
