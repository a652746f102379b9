#include <cmath>
#include <random>

#include "doctest.h"
#include "unishear/errors.hpp"
#include "unishear/system.hpp"

using namespace unishear;

namespace {
std::vector<Rational> seq(std::initializer_list<Rational> v) { return std::vector<Rational>(v); }
}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("5/3") == Rational(5, 3));
  CHECK(parse_rational("0.3") == Rational(3, 10));
  CHECK(parse_rational("2") == Rational(2));
  CHECK(parse_rational("-4/6") == Rational(-2, 3));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK_THROWS_AS(parse_rational("x"), ConfigError);
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
}

TEST_CASE("admissibility") {
  CHECK_NOTHROW(validate_scaling_sequence(seq({0, 1, 1})));
  try {
    validate_scaling_sequence(seq({0, 1, Rational(3, 10)}));
    FAIL("expected NotAdmissible");
  } catch (const NotAdmissible& e) {
    CHECK(e.index() == 2);
  }
  CHECK_NOTHROW(validate_scaling_sequence(seq({0, 1, 1, Rational(5, 3)})));
  try {
    validate_scaling_sequence(seq({0, 1, 1, 2}));
    FAIL("expected NotAdmissible");
  } catch (const NotAdmissible& e) {
    CHECK(e.index() == 3);
  }
  CHECK_THROWS_AS(validate_scaling_sequence(seq({1, 1})), WrongAnchor);
}

TEST_CASE("presets") {
  const auto p = preset_alpha(1.0, 5);
  for (int j = 1; j < 5; ++j) CHECK(p.alpha(j) == Rational(1));
  CHECK(preset_alpha(0.5, 3).alpha(2) == Rational(1, 2));
  CHECK(preset_alpha(0.4, 3).alpha(2) == Rational(1, 2));
  const auto w = preset_wavelet(4);
  CHECK(w.values() == seq({0, 1, Rational(3, 2), Rational(5, 3)}));
  for (int j = 1; j < 4; ++j) CHECK(w.shear_bound(j) == 2);
  CHECK(parse_preset("parabolic", 3).values() == seq({0, 1, 1}));
  CHECK(parse_preset("seq:0,1,1/2", 3).alpha(2) == Rational(1, 2));
  CHECK_THROWS_AS(parse_preset("seq:0,1,0.3", 3), NotAdmissible);
  CHECK_THROWS_AS(parse_preset("bogus", 3), ConfigError);
}

TEST_CASE("band enumeration") {
  const auto p = preset_alpha(1.0, 3);
  const auto bands = enumerate_bands(p);
  CHECK(bands.size() == expected_band_count(p));
  CHECK(bands[0].iota == Orientation::coarse);
  int h2 = 0, v2 = 0, b2 = 0, lo = 0, hi = 0;
  for (const auto& b : bands) {
    if (b.j == 2 && b.iota == Orientation::horizontal) {
      ++h2;
      lo = std::min(lo, b.l);
      hi = std::max(hi, b.l);
    }
    if (b.j == 2 && b.iota == Orientation::vertical) ++v2;
    if (b.j == 2 && b.iota == Orientation::boundary) {
      ++b2;
      CHECK(std::abs(b.l) == 4);
    }
    if (b.j == 0 && b.iota != Orientation::coarse) CHECK(std::abs(b.l) == (b.iota == Orientation::boundary ? 1 : 0));
  }
  CHECK(h2 == 7);
  CHECK(v2 == 7);
  CHECK(b2 == 2);
  CHECK(lo == -3);
  CHECK(hi == 3);
  // Wavelet preset: 3 interior shears per cone plus 2 boundary bands per scale.
  const auto wb = enumerate_bands(preset_wavelet(4));
  for (int j = 1; j < 4; ++j) {
    int n = 0;
    for (const auto& b : wb) n += b.j == j;
    CHECK(n == 8);
  }
}

TEST_CASE("band weight examples") {
  const auto bands = enumerate_bands(preset_alpha(1.0, 3));
  CHECK(band_weight(bands[0], {0.0, 0.0}) == 1.0);
  for (const auto& b : bands) {
    if (b.iota != Orientation::horizontal || b.j != 2) continue;
    // Outside the trapezoid: far from the shear direction, or off the corona.
    CHECK(band_weight(b, {4.0, 4.0 * (b.l + 2.5) / b.shear_bound}) == 0.0);
    CHECK(band_weight(b, {1.0, 0.0}) == 0.0);
    CHECK(band_weight(b, {100.0, 0.0}) == 0.0);
  }
}

TEST_CASE("boundary seam continuity") {
  for (const auto& b : enumerate_bands(preset_alpha(1.0, 4))) {
    if (b.iota != Orientation::boundary || b.j < 1) continue;
    const double r0 = std::ldexp(1.0, 2 * b.j - 4), r1 = std::ldexp(1.0, 2 * b.j - 1);
    const double sgn = b.l > 0 ? 1.0 : -1.0;
    double worst = 0.0, jump = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = r0 + (r1 - r0) * i / 200.0;
      const Freq d{t, sgn * t};
      worst = std::max(worst, std::fabs(boundary_horizontal_formula(b, d) - boundary_vertical_formula(b, d)));
      const double e = 1e-9 * t;
      jump = std::max(jump, std::fabs(band_weight(b, {t + e, sgn * t}) - band_weight(b, {t, sgn * (t + e)})));
    }
    CHECK(worst <= 1e-12);
    CHECK(jump <= 1e-6);
  }
}

TEST_CASE("lattice factor and normalization") {
  for (const auto& b : enumerate_bands(preset_alpha(1.0, 3))) {
    if (b.iota == Orientation::boundary && b.j >= 1)
      CHECK(lattice_factor(b) == 0.5);
    else
      CHECK(lattice_factor(b) == 1.0);
    if (b.j >= 0) CHECK(b.normalization == doctest::Approx(std::pow(2.0, -(2.0 + b.alpha.value()) * b.j / 2.0)));
  }
}
