#include <cmath>
#include <random>

#include "doctest.h"
#include "unishear/errors.hpp"
#include "unishear/model.hpp"

using namespace unishear;

TEST_CASE("weight spec validation") {
  CHECK_NOTHROW(WeightSpec{}.validate());
  CHECK_THROWS_AS((WeightSpec{0.0, 1.0, "bump"}).validate(), ConfigError);
  CHECK_THROWS_AS((WeightSpec{0.1, 1.5, "bump"}).validate(), ConfigError);
  CHECK_THROWS_AS((WeightSpec{0.1, 1.0, "box"}).validate(), ConfigError);
  const WeightSpec w;
  CHECK(weight_profile(0.0, w) == 1.0);
  CHECK(weight_profile(w.rho, w) == 0.0);
  CHECK(weight_profile(-0.2, w) == 0.0);
}

TEST_CASE("weight transform") {
  const WeightSpec w;
  const WeightTransform t(w, 256);
  const auto z = t(0.0);
  CHECK(z.real() > 0.0);
  CHECK(std::fabs(z.imag()) <= 1e-15 * z.real());
  CHECK(z.real() == doctest::Approx(weight_ft_quadrature(0.0, w).real()).epsilon(1e-10));
  for (double xi : {1.0, 7.5, 40.0, 113.0}) {
    const auto a = t(xi), b = t(-xi);
    CHECK(std::abs(a - std::conj(b)) <= 1e-15 * z.real());
    CHECK(std::abs(a - weight_ft_quadrature(xi, w)) <= 1e-10 * z.real());
  }
  CHECK(std::abs(t(32.0 / w.rho)) < 1e-6 * z.real());
  CHECK(std::abs(t.at(5) - t(5.0)) <= 1e-15 * z.real());
}

TEST_CASE("filtered model properties") {
  const int N = 128;
  for (int j = 1; j <= 3; ++j) {
    const auto m = filtered_model(j, N, WeightSpec{});
    double mean = 0.0;
    for (double v : m.image.px) mean += v;
    CHECK(std::fabs(mean / (N * N)) <= 1e-12);
    CHECK(m.imag_residue <= 1e-12);
    double asym = 0.0;
    // Even in x2: pixel row r mirrors to N-1-r on the half-pixel grid.
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) asym = std::max(asym, std::fabs(m.image(r, c) - m.image(N - 1 - r, c)));
    CHECK(asym <= 1e-12 * max_abs(m.image));
  }
  CHECK_THROWS_AS(filtered_model(5, 128, WeightSpec{}), ScaleTooFine);
}

TEST_CASE("vertical decay and concentration") {
  // The envelope fit needs 16 <= 2^{2j}|x2| <= 1/4 to span a decade, so j = 4 at N = 512.
  const auto fine = filtered_model(4, 512, WeightSpec{});
  CHECK(vertical_decay(fine).exponent >= 2.0);
  const int N = 256;
  for (int j = 1; j <= 3; ++j) {
    const auto m = filtered_model(j, N, WeightSpec{});
    // 99% of the energy within |x2| <= 32 * 2^{-2j} * 1/2.
    CHECK(row_energy_fraction(m.image, 32.0 * std::ldexp(0.5, -2 * j)) >= 0.99);
  }
}

TEST_CASE("masks") {
  CHECK_THROWS_AS(make_mask(0.0, 64), ConfigError);
  CHECK_THROWS_AS(make_mask(0.6, 64), ConfigError);
  CHECK(make_mask(0.25 / 64, 64).empty());
  const auto all = make_mask(0.5, 64);
  CHECK(all.column_count() == 64);
  for (double h : {0.01, 0.05, 0.1, 0.2, 1.0 / 64, 1.5 / 64}) {
    const auto m = make_mask(h, 64);
    int count = 0;
    for (int i = 0; i < 64; ++i) count += std::fabs(pixel_coordinate(i, 64)) <= h;
    CHECK(m.column_count() == count);
    for (int i = 0; i < 64; ++i) CHECK(m.columns[i] == m.columns[63 - i]);
  }
  CHECK(make_mask(1.0 / 64, 64).column_count() == 2);
  CHECK(empty_mask(64).empty());
  const auto ind = make_mask(0.1, 16).indicator();
  CHECK(ind.size() == 256);
}

TEST_CASE("projections are exact") {
  std::mt19937 g(3);
  std::normal_distribution<double> d;
  Image f(64), h(64);
  for (double& v : f.px) v = d(g);
  for (double& v : h.px) v = d(g);
  const auto m = make_mask(0.1, 64);
  const Image k = project_known(f, m), mm = project_missing(f, m);
  for (std::size_t i = 0; i < f.px.size(); ++i) CHECK(k.px[i] + mm.px[i] == f.px[i]);
  CHECK(project_known(k, m).px == k.px);
  CHECK(dot(project_known(f, m), project_missing(h, m)) == 0.0);
  CHECK_THROWS_AS(project_known(Image(32), m), DimensionMismatch);
}

TEST_CASE("filter recovery check") {
  const WeightSpec w;
  CHECK(filter_recovery_check(w, 128, 4) <= 1e-10);
  CHECK(filter_recovery_check([](int) { return std::complex<double>(0.0); }, 128, 4) == 0.0);
  // Removing scale 2 leaves max |w^| W_2^2 over the grid.
  const WeightTransform t(w, 128);
  double expect = 0.0;
  for (int k2 = -64; k2 < 64; ++k2)
    for (int k1 = -64; k1 < 64; ++k1) {
      if (k1 == -64 || k2 == -64) continue;
      const double c = corona({double(k1), double(k2)}, 2);
      expect = std::max(expect, std::abs(t.at(k1)) * c * c);
    }
  CHECK(filter_recovery_check(w, 128, 4, 2) == doctest::Approx(expect).epsilon(1e-10));
}
